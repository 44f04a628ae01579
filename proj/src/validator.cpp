#include "mol/validator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <variant>

namespace mol {
namespace {

enum class VarKind { Unknown, Reference, Value };

struct MethodChecker {
    const Program& program;
    const std::map<std::string, const ClassifierDecl*>& classifiers;
    const std::map<std::pair<std::string, int>, std::set<AbstractionKey>>& callables;
    const std::map<AbstractionKey, std::vector<const MethodDecl*>>& impls;
    const MethodDecl& method;
    DiagnosticList& diags;

    std::map<std::string, VarKind> kinds;

    void report(const SourcePos& pos, const std::string& kind, const std::string& msg) {
        diags.push_back({Severity::Error, kind, pos, method.qualifiedName(), msg});
    }

    void run() {
        std::set<std::string> seen_params;
        std::set<std::string> assigned;
        for (const auto& p : method.params) {
            if (!seen_params.insert(p.name).second)
                report(method.pos, "duplicate-parameter",
                       "duplicate parameter '" + p.name + "'");
            if (p.kind == ParamKind::Reference && !classifiers.count(p.type_name))
                report(method.pos, "unresolved-name",
                       "parameter type '" + p.type_name + "' does not name a classifier");
            kinds[p.name] = p.kind == ParamKind::Reference ? VarKind::Reference : VarKind::Value;
            assigned.insert(p.name);
        }
        walk(method.body, assigned);
    }

    void checkUse(const std::string& var, const SourcePos& pos,
                  const std::set<std::string>& assigned) {
        if (!assigned.count(var))
            report(pos, "possibly-unassigned-variable",
                   "variable '" + var + "' may be used before assignment");
    }

    void requireReference(const std::string& var, const SourcePos& pos, const char* what) {
        auto it = kinds.find(var);
        if (it != kinds.end() && it->second == VarKind::Value)
            report(pos, "kind-mismatch",
                   std::string(what) + " applies to reference variables, but '" + var +
                       "' is value-typed");
    }

    VarKind exprKind(const Expr& e, const std::set<std::string>& assigned, const SourcePos& pos) {
        if (std::holds_alternative<NullLit>(e)) return VarKind::Reference;
        if (std::holds_alternative<OpaqueExpr>(e)) return VarKind::Value;
        if (const auto* n = std::get_if<NewExpr>(&e)) {
            if (!classifiers.count(n->classifier))
                report(pos, "unresolved-name",
                       "'new " + n->classifier + "' does not name a classifier");
            return VarKind::Reference;
        }
        const auto& v = std::get<VarExpr>(e);
        checkUse(v.name, pos, assigned);
        auto it = kinds.find(v.name);
        return it == kinds.end() ? VarKind::Unknown : it->second;
    }

    void checkCond(const Cond& c, const std::set<std::string>& assigned, const SourcePos& pos) {
        if (const auto* n = std::get_if<IsNullCond>(&c)) {
            checkUse(n->var, pos, assigned);
            requireReference(n->var, pos, "null test");
        } else if (const auto* n2 = std::get_if<NotNullCond>(&c)) {
            checkUse(n2->var, pos, assigned);
            requireReference(n2->var, pos, "null test");
        }
    }

    void checkCall(const CallStmt& c, const SourcePos& pos,
                   const std::set<std::string>& assigned) {
        for (const auto& a : c.args)
            if (!a.is_null) checkUse(a.var, pos, assigned);

        auto it = callables.find({c.method, int(c.args.size())});
        if (it == callables.end()) {
            // Distinguish wrong arity from a completely unknown name.
            bool name_exists = std::any_of(
                program.methods.begin(), program.methods.end(),
                [&](const MethodDecl& m) { return m.name == c.method; });
            if (name_exists)
                report(pos, "arity-mismatch",
                       "arity mismatch at call " + c.method + "(...): no declaration takes " +
                           std::to_string(c.args.size()) + " arguments");
            else
                report(pos, "unresolved-call", "call target '" + c.method + "' is not declared");
            return;
        }
        if (it->second.size() > 1) {
            report(pos, "ambiguous-call",
                   "call " + c.method + "(...) matches " + std::to_string(it->second.size()) +
                       " distinct abstractions; targets must be unique per name and arity");
            return;
        }
        const AbstractionKey& key = *it->second.begin();
        for (size_t i = 0; i < c.args.size(); ++i) {
            bool callee_ref = key.type_row[i] != "val";
            if (c.args[i].is_null) {
                if (!callee_ref)
                    report(pos, "kind-mismatch",
                           "null passed at value position " + std::to_string(i) + " of " +
                               c.method);
                continue;
            }
            auto kit = kinds.find(c.args[i].var);
            if (kit == kinds.end() || kit->second == VarKind::Unknown) continue;
            bool arg_ref = kit->second == VarKind::Reference;
            if (arg_ref != callee_ref)
                report(pos, "kind-mismatch",
                       "argument '" + c.args[i].var + "' at position " + std::to_string(i) +
                           " of " + c.method + " has the wrong kind");
        }
    }

    // Definite assignment. Returns the set of variables assigned on every
    // path through `stmts` starting from `assigned`; a statement after
    // return/fail is unreachable and imposes nothing.
    std::set<std::string> walk(const StmtList& stmts, std::set<std::string> assigned) {
        bool unreachable = false;
        for (const auto& s : stmts) {
            if (unreachable) break; // dead code: skip silently
            if (const auto* d = std::get_if<DerefStmt>(&s.node)) {
                checkUse(d->var, s.pos, assigned);
                requireReference(d->var, s.pos, "deref");
            } else if (const auto* c = std::get_if<CallStmt>(&s.node)) {
                checkCall(*c, s.pos, assigned);
            } else if (const auto* a = std::get_if<AssignStmt>(&s.node)) {
                VarKind k = exprKind(a->value, assigned, s.pos);
                auto it = kinds.find(a->var);
                if (it == kinds.end() || it->second == VarKind::Unknown) {
                    kinds[a->var] = k;
                } else if (k != VarKind::Unknown && it->second != k) {
                    report(s.pos, "kind-mismatch",
                           "variable '" + a->var + "' is assigned both reference and value data");
                }
                assigned.insert(a->var);
            } else if (const auto* f = std::get_if<IfStmt>(&s.node)) {
                checkCond(f->cond, assigned, s.pos);
                auto then_set = walk(f->then_body, assigned);
                auto else_set = walk(f->else_body, assigned);
                std::set<std::string> joined;
                std::set_intersection(then_set.begin(), then_set.end(), else_set.begin(),
                                      else_set.end(), std::inserter(joined, joined.begin()));
                assigned = std::move(joined);
            } else if (const auto* w = std::get_if<WhileStmt>(&s.node)) {
                checkCond(w->cond, assigned, s.pos);
                walk(w->body, assigned); // zero iterations: nothing escapes
            } else if (std::holds_alternative<ReturnStmt>(s.node) ||
                       std::holds_alternative<FailStmt>(s.node)) {
                unreachable = true;
            }
        }
        if (unreachable) {
            // Everything counts as assigned after a terminator; callers
            // intersect, so this is the identity element.
            std::set<std::string> top;
            for (const auto& [name, _] : kinds) top.insert(name);
            return top;
        }
        return assigned;
    }
};

} // namespace

DiagnosticList validateProgram(const Program& p) {
    DiagnosticList diags;
    auto report = [&](const SourcePos& pos, const std::string& kind, const std::string& msg) {
        diags.push_back({Severity::Error, kind, pos, "", msg});
    };

    std::map<std::string, const ClassifierDecl*> classifiers;
    for (const auto& c : p.classifiers) {
        if (!classifiers.emplace(c.name, &c).second)
            report(c.pos, "duplicate-declaration", "duplicate classifier '" + c.name + "'");
    }
    std::map<std::string, const FaceDecl*> faces;
    for (const auto& f : p.faces) {
        if (!faces.emplace(f.name, &f).second)
            report(f.pos, "duplicate-declaration", "duplicate face '" + f.name + "'");
    }
    std::map<std::string, const ClassDecl*> classes;
    for (const auto& c : p.classes) {
        if (!classes.emplace(c.name, &c).second)
            report(c.pos, "duplicate-declaration", "duplicate class '" + c.name + "'");
    }

    // Classifier hierarchy: parents resolve, no cycles (self-ancestry included).
    for (const auto& c : p.classifiers) {
        for (const auto& parent : c.parents)
            if (!classifiers.count(parent))
                report(c.pos, "unresolved-name",
                       "classifier '" + c.name + "' extends unknown '" + parent + "'");
        std::set<std::string> visited;
        std::vector<std::string> frontier(c.parents.begin(), c.parents.end());
        bool cyclic = false;
        while (!frontier.empty() && !cyclic) {
            std::string cur = frontier.back();
            frontier.pop_back();
            if (cur == c.name) {
                cyclic = true;
                break;
            }
            if (!visited.insert(cur).second) continue;
            auto it = classifiers.find(cur);
            if (it == classifiers.end()) continue;
            for (const auto& parent : it->second->parents) frontier.push_back(parent);
        }
        if (cyclic)
            report(c.pos, "cyclic-classifier-hierarchy",
                   "cyclic classifier hierarchy through '" + c.name + "'");
    }

    for (const auto& f : p.faces) {
        std::set<MethodSignature> seen;
        for (const auto& sig : f.signatures) {
            if (!seen.insert(sig).second)
                report(f.pos, "duplicate-declaration",
                       "face '" + f.name + "' lists signature '" + sig.key().str() + "' twice");
            for (const auto& sp : sig.params)
                if (sp.kind == ParamKind::Reference && !classifiers.count(sp.type_name))
                    report(f.pos, "unresolved-name",
                           "face '" + f.name + "' signature '" + sig.name +
                               "' uses unknown type '" + sp.type_name + "'");
        }
    }

    for (const auto& c : p.classes) {
        if (!classifiers.count(c.classifier))
            report(c.pos, "unresolved-name",
                   "class '" + c.name + "' is declared as unknown classifier '" + c.classifier +
                       "'");
        std::set<std::string> field_names;
        for (const auto& f : c.fields) {
            if (!field_names.insert(f.name).second)
                report(f.pos, "duplicate-declaration",
                       "class '" + c.name + "' declares field '" + f.name + "' twice");
            if (!classifiers.count(f.type_name))
                report(f.pos, "unresolved-name",
                       "field '" + f.name + "' has unknown type '" + f.type_name + "'");
        }
    }

    // Method uniqueness per scope (class or global) and the callable table.
    std::map<std::pair<std::string, AbstractionKey>, const MethodDecl*> scoped;
    std::map<std::pair<std::string, int>, std::set<AbstractionKey>> callables;
    std::map<AbstractionKey, std::vector<const MethodDecl*>> impls;
    for (const auto& m : p.methods) {
        if (m.owner && !classes.count(*m.owner))
            report(m.pos, "unresolved-name",
                   "method '" + m.name + "' claims unknown owner class '" + *m.owner + "'");
        AbstractionKey key = m.key();
        std::string scope = m.owner ? "class " + *m.owner : std::string("<global>");
        if (!scoped.emplace(std::make_pair(scope, key), &m).second)
            report(m.pos, "duplicate-declaration",
                   "method '" + key.str() + "' declared twice in " + scope);
        callables[{m.name, key.arity()}].insert(key);
        impls[key].push_back(&m);
    }

    for (const auto& m : p.methods) {
        MethodChecker checker{p, classifiers, callables, impls, m, diags, {}};
        checker.run();
    }

    sortDiagnostics(diags);
    return diags;
}

} // namespace mol
