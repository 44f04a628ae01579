#include "mol/ast.hpp"

namespace mol {

std::vector<int> AbstractionKey::refPositions() const {
    std::vector<int> out;
    for (int i = 0; i < int(type_row.size()); ++i)
        if (type_row[i] != "val") out.push_back(i);
    return out;
}

int AbstractionKey::refParamCount() const {
    int n = 0;
    for (const auto& t : type_row)
        if (t != "val") ++n;
    return n;
}

std::string AbstractionKey::str() const {
    std::string out = name;
    out += '(';
    for (size_t i = 0; i < type_row.size(); ++i) {
        if (i) out += ',';
        out += type_row[i];
    }
    out += ')';
    return out;
}

AbstractionKey MethodSignature::key() const {
    AbstractionKey k;
    k.name = name;
    k.type_row.reserve(params.size());
    for (const auto& p : params)
        k.type_row.push_back(p.kind == ParamKind::Value ? "val" : p.type_name);
    return k;
}

AbstractionKey MethodDecl::key() const {
    AbstractionKey k;
    k.name = name;
    k.type_row.reserve(params.size());
    for (const auto& p : params)
        k.type_row.push_back(p.kind == ParamKind::Value ? "val" : p.type_name);
    return k;
}

std::string MethodDecl::qualifiedName() const {
    if (owner) return *owner + "::" + name;
    return name;
}

bool IfStmt::operator==(const IfStmt& o) const {
    return cond == o.cond && then_body == o.then_body && else_body == o.else_body;
}

bool WhileStmt::operator==(const WhileStmt& o) const {
    return cond == o.cond && body == o.body;
}

void refreshEntryPoints(Program& p) {
    p.entry_points.clear();
    for (const auto& m : p.methods)
        if (!m.owner && m.params.empty()) p.entry_points.push_back(m.name);
}

std::string nullabilityKeyword(Nullability n) {
    return n == Nullability::Required ? "req" : "opt";
}

} // namespace mol
