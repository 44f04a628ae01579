#include "mol/printer.hpp"

#include <sstream>
#include <variant>

namespace mol {
namespace {

class Writer {
public:
    void line(const std::string& text) {
        for (int i = 0; i < indent_; ++i) out_ << "  ";
        out_ << text << '\n';
    }
    void open(const std::string& head) {
        line(head + " {");
        ++indent_;
    }
    void close() {
        --indent_;
        line("}");
    }
    void reopen(const std::string& text) {
        --indent_;
        line(text);
        ++indent_;
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    int indent_ = 0;
};

std::string paramDecl(const Param& p) {
    if (p.kind == ParamKind::Value) return "val " + p.name;
    return nullabilityKeyword(p.nullability) + " " + p.name + ": " + p.type_name;
}

std::string sigParamDecl(const SigParam& sp, int index) {
    std::string name = "p" + std::to_string(index);
    if (sp.kind == ParamKind::Value) return "val " + name;
    return "req " + name + ": " + sp.type_name;
}

std::string exprText(const Expr& e) {
    if (std::holds_alternative<NullLit>(e)) return "null";
    if (std::holds_alternative<OpaqueExpr>(e)) return "opaque";
    if (const auto* n = std::get_if<NewExpr>(&e)) return "new " + n->classifier;
    return std::get<VarExpr>(e).name;
}

std::string condText(const Cond& c) {
    if (const auto* n = std::get_if<IsNullCond>(&c)) return n->var + " == null";
    if (const auto* n2 = std::get_if<NotNullCond>(&c)) return n2->var + " != null";
    return "opaque";
}

void printStmts(Writer& w, const StmtList& stmts) {
    for (const auto& s : stmts) {
        if (const auto* d = std::get_if<DerefStmt>(&s.node)) {
            w.line("deref " + d->var + ";");
        } else if (const auto* c = std::get_if<CallStmt>(&s.node)) {
            std::string args;
            for (size_t i = 0; i < c->args.size(); ++i) {
                if (i) args += ", ";
                args += c->args[i].is_null ? "null" : c->args[i].var;
            }
            w.line("call " + c->method + "(" + args + ");");
        } else if (const auto* a = std::get_if<AssignStmt>(&s.node)) {
            w.line(a->var + " = " + exprText(a->value) + ";");
        } else if (const auto* f = std::get_if<IfStmt>(&s.node)) {
            w.open("if " + condText(f->cond));
            printStmts(w, f->then_body);
            if (!f->else_body.empty()) {
                w.reopen("} else {");
                printStmts(w, f->else_body);
            }
            w.close();
        } else if (const auto* wh = std::get_if<WhileStmt>(&s.node)) {
            w.open("while " + condText(wh->cond));
            printStmts(w, wh->body);
            w.close();
        } else if (std::holds_alternative<ReturnStmt>(s.node)) {
            w.line("return;");
        } else {
            w.line("fail;");
        }
    }
}

} // namespace

std::string printProgram(const Program& p) {
    Writer w;
    for (const auto& c : p.classifiers) {
        std::string head = "classifier " + c.name;
        if (!c.parents.empty()) {
            head += " extends ";
            for (size_t i = 0; i < c.parents.size(); ++i) {
                if (i) head += ", ";
                head += c.parents[i];
            }
        }
        w.line(head + ";");
    }
    for (const auto& f : p.faces) {
        w.open("face " + f.name);
        for (const auto& sig : f.signatures) {
            std::string params;
            for (size_t i = 0; i < sig.params.size(); ++i) {
                if (i) params += ", ";
                params += sigParamDecl(sig.params[i], int(i));
            }
            w.line(sig.name + "(" + params + ");");
        }
        w.close();
    }

    auto printMethod = [&w](const MethodDecl& m) {
        std::string params;
        for (size_t i = 0; i < m.params.size(); ++i) {
            if (i) params += ", ";
            params += paramDecl(m.params[i]);
        }
        w.open("method " + m.name + "(" + params + ")");
        printStmts(w, m.body);
        w.close();
    };

    for (const auto& c : p.classes) {
        w.open("class " + c.name + " is " + c.classifier);
        for (const auto& f : c.fields)
            w.line(nullabilityKeyword(f.nullability) + " " + f.name + ": " + f.type_name + ";");
        for (const auto& m : p.methods)
            if (m.owner && *m.owner == c.name) printMethod(m);
        w.close();
    }
    for (const auto& m : p.methods)
        if (!m.owner) printMethod(m);
    return w.str();
}

} // namespace mol
