#include "mol/checker.hpp"

#include <algorithm>
#include <cassert>
#include <variant>

namespace mol {

bool faceSubtype(const std::set<AbstractionKey>& sub, const std::set<AbstractionKey>& sup) {
    return std::includes(sub.begin(), sub.end(), sup.begin(), sup.end());
}

AssurancePool entryPool(const MethodDecl& m, const Registry& registry) {
    AssurancePool pool;
    for (const auto& p : m.params) {
        if (p.kind != ParamKind::Reference || p.nullability != Nullability::Required) continue;
        auto sigs = registry.faceSignatures(p.type_name);
        pool.proven.insert(sigs.begin(), sigs.end());
    }
    return pool;
}

namespace {

Diagnostic checkError(const std::string& kind, const SourcePos& pos, const std::string& method,
                      const std::string& message) {
    return {Severity::Error, kind, pos, method, message};
}

// Resolve a call to an abstraction key. Falls back to face signatures when
// no method declares the key, so a proof/registry mismatch can be reported
// as no-implementation rather than a bare resolution failure.
const AbstractionKey* resolveForCheck(const Registry& registry, const CallStmt& call,
                                      AbstractionKey& storage, bool& has_implementation) {
    if (const AbstractionKey* key = registry.resolveCall(call.method, int(call.args.size()))) {
        has_implementation = true;
        return key;
    }
    has_implementation = false;
    const AbstractionKey* found = nullptr;
    for (const auto& [name, face] : registry.faces) {
        (void)name;
        for (const auto& sig : face->signatures) {
            if (sig.name != call.method || int(sig.params.size()) != int(call.args.size()))
                continue;
            AbstractionKey key = sig.key();
            if (found && !(*found == key)) return nullptr; // ambiguous
            storage = key;
            found = &storage;
        }
    }
    return found;
}

} // namespace

std::optional<Diagnostic> checkCall(const AssurancePool& pool, const CallStmt& call,
                                    const SourcePos& pos, CheckMode mode,
                                    const Registry& registry,
                                    const std::map<std::string, DeclType>& local_types,
                                    const std::set<std::string>& known_non_null) {
    AbstractionKey storage;
    bool has_implementation = false;
    const AbstractionKey* key = resolveForCheck(registry, call, storage, has_implementation);
    if (!key)
        return checkError("unresolved-call", pos, "",
                          "call target '" + call.method + "' is not declared");

    if (mode == CheckMode::Continuum) {
        bool proven = pool.proven.count(*key) != 0;
        if (!proven) {
            for (const auto& arg : call.args) {
                if (arg.is_null) continue;
                auto it = local_types.find(arg.var);
                if (it == local_types.end()) continue; // value-typed or untracked
                bool trusted = it->second.nullability == Nullability::Required ||
                               known_non_null.count(arg.var) != 0;
                if (trusted && registry.faceSignatures(it->second.face).count(*key)) {
                    proven = true;
                    break;
                }
            }
        }
        if (!proven)
            return checkError("no-assurance", pos, "",
                              "no non-nullable argument proves availability of '" + key->str() +
                                  "'");
        if (!has_implementation)
            return checkError("no-implementation", pos, "",
                              "'" + key->str() +
                                  "' is proven available but the registry has no implementation");
        return std::nullopt;
    }

    // Conventional: the first argument is the target.
    if (call.args.empty() || call.args[0].is_null)
        return checkError("wrong-owner", pos, "",
                          "call to '" + key->str() + "' has no usable target argument");
    auto it = local_types.find(call.args[0].var);
    if (it == local_types.end())
        return checkError("wrong-owner", pos, "",
                          "target argument '" + call.args[0].var + "' is not a reference");
    const DeclType& target = it->second;
    if (!registry.faceSignatures(target.face).count(*key))
        return checkError("wrong-owner", pos, "",
                          "face '" + target.face + "' of target '" + call.args[0].var +
                              "' does not list '" + key->str() + "'");
    if (!has_implementation)
        return checkError("no-implementation", pos, "",
                          "'" + key->str() +
                              "' is proven available but the registry has no implementation");
    const auto& impls = registry.implementations.at(*key);
    for (const MethodDecl* impl : impls) {
        if (!impl->owner) return std::nullopt; // static-style: no receiver dispatch
        auto cls = registry.classes.find(*impl->owner);
        assert(cls != registry.classes.end());
        if (registry.isAncestorOrEqual(cls->second->classifier, target.classifier))
            return std::nullopt;
    }
    return checkError("wrong-owner", pos, "",
                      "no implementation of '" + key->str() +
                          "' is owned by classifier '" + target.classifier + "' or an ancestor");
}

std::optional<Diagnostic> checkAssignment(const DeclType& target, const AssignmentSource& source,
                                          const Registry& registry, const SourcePos& pos) {
    if (source.nullable && target.nullability == Nullability::Required)
        return checkError("null-to-required", pos, "",
                          "a possibly-null value may not be assigned to a required declaration");
    if (!source.classifier) return std::nullopt; // bare null into an optional target
    if (!registry.isAncestorOrEqual(target.classifier, *source.classifier))
        return checkError("classifier-mismatch", pos, "",
                          "source classifier '" + *source.classifier +
                              "' is not '" + target.classifier + "' or a descendant");
    auto required = registry.faceSignatures(target.face);
    std::vector<std::string> missing;
    for (const auto& sig : required)
        if (!source.proven.count(sig)) missing.push_back(sig.str());
    if (!missing.empty()) {
        std::string list;
        for (size_t i = 0; i < missing.size(); ++i) {
            if (i) list += ", ";
            list += missing[i];
        }
        return checkError("face-unproven", pos, "",
                          "face '" + target.face + "' requires unproven signatures: " + list);
    }
    return std::nullopt;
}

namespace {

struct CheckState {
    std::map<std::string, DeclType> local_types;
    std::set<std::string> value_vars;
    std::set<std::string> known_non_null;
    AssurancePool pool;
};

struct ProgramChecker {
    const Registry& registry;
    CheckMode mode;
    const MethodDecl& method;
    DiagnosticList& diags;

    void report(std::optional<Diagnostic> d) {
        if (!d) return;
        d->method = method.qualifiedName();
        diags.push_back(std::move(*d));
    }

    void absorbFace(CheckState& st, const std::string& face_name) {
        auto sigs = registry.faceSignatures(face_name);
        st.pool.proven.insert(sigs.begin(), sigs.end());
    }

    // Statically detectable dispatch ties: for the declared classifier of
    // the first argument and each of its descendants, two owned
    // implementations at the same ancestry distance are ambiguous.
    void warnOnDispatchTies(const CheckState& st, const CallStmt& call, const SourcePos& pos) {
        const AbstractionKey* key = registry.resolveCall(call.method, int(call.args.size()));
        if (!key) return;
        const auto& impls = registry.implementations.at(*key);
        if (impls.size() < 2) return;
        if (call.args.empty() || call.args[0].is_null) return;
        auto it = st.local_types.find(call.args[0].var);
        if (it == st.local_types.end()) return;
        const std::string& declared = it->second.classifier;
        for (const auto& [candidate, _] : registry.classifiers) {
            if (!registry.isAncestorOrEqual(declared, candidate)) continue;
            int best = -1;
            std::vector<std::string> at_best;
            for (const MethodDecl* impl : impls) {
                if (!impl->owner) continue;
                auto cls = registry.classes.find(*impl->owner);
                int dist = registry.ancestryDistance(cls->second->classifier, candidate);
                if (dist < 0) continue;
                if (best < 0 || dist < best) {
                    best = dist;
                    at_best = {*impl->owner};
                } else if (dist == best) {
                    at_best.push_back(*impl->owner);
                }
            }
            if (at_best.size() > 1) {
                std::string owners;
                for (size_t i = 0; i < at_best.size(); ++i) {
                    if (i) owners += ", ";
                    owners += at_best[i];
                }
                diags.push_back({Severity::Warning, "ambiguous-dispatch", pos,
                                 method.qualifiedName(),
                                 "dispatch of '" + key->str() + "' on classifier '" + candidate +
                                     "' ties between classes " + owners +
                                     "; declaration order decides"});
                return;
            }
        }
    }

    AssignmentSource sourceInfo(const Expr& e, const CheckState& st, std::string* face_name,
                                bool* is_value) {
        *is_value = false;
        face_name->clear();
        if (std::holds_alternative<NullLit>(e)) return {true, std::nullopt, {}};
        if (const auto* n = std::get_if<NewExpr>(&e)) {
            *face_name = n->classifier;
            return {false, n->classifier, registry.faceSignatures(n->classifier)};
        }
        if (std::holds_alternative<OpaqueExpr>(e)) {
            *is_value = true;
            return {};
        }
        const auto& v = std::get<VarExpr>(e);
        if (st.value_vars.count(v.name)) {
            *is_value = true;
            return {};
        }
        auto it = st.local_types.find(v.name);
        if (it == st.local_types.end()) {
            // untracked (poisoned by an earlier error); nothing provable
            return {true, std::nullopt, {}};
        }
        bool non_null = it->second.nullability == Nullability::Required ||
                        st.known_non_null.count(v.name) != 0;
        *face_name = it->second.face;
        return {!non_null, it->second.classifier, registry.faceSignatures(it->second.face)};
    }

    void handleAssign(const AssignStmt& a, const SourcePos& pos, CheckState& st) {
        std::string face_name;
        bool is_value = false;
        AssignmentSource src = sourceInfo(a.value, st, &face_name, &is_value);

        if (is_value) {
            st.local_types.erase(a.var);
            st.known_non_null.erase(a.var);
            st.value_vars.insert(a.var);
            return;
        }
        st.value_vars.erase(a.var);

        const DeclType* target = nullptr;
        auto existing = st.local_types.find(a.var);
        if (existing != st.local_types.end()) target = &existing->second;

        if (target) {
            report(checkAssignment(*target, src, registry, pos));
            if (!src.nullable) {
                st.known_non_null.insert(a.var);
                absorbFace(st, target->face);
            } else {
                st.known_non_null.erase(a.var);
            }
            return;
        }
        // First assignment declares the local; locals default to Required.
        if (src.nullable || !src.classifier) {
            report(checkError("null-to-required", pos, "",
                              "local '" + a.var +
                                  "' is required by default and may not start null"));
            return; // stays untracked
        }
        st.local_types[a.var] = DeclType{*src.classifier, face_name, Nullability::Required};
        st.known_non_null.insert(a.var);
        absorbFace(st, face_name);
    }

    void withNonNull(CheckState st, const std::string& var, const StmtList& body) {
        auto it = st.local_types.find(var);
        if (it != st.local_types.end()) {
            st.known_non_null.insert(var);
            absorbFace(st, it->second.face);
        }
        walk(body, st);
    }

    void walk(const StmtList& stmts, CheckState& st) {
        for (const auto& s : stmts) {
            if (const auto* c = std::get_if<CallStmt>(&s.node)) {
                report(checkCall(st.pool, *c, s.pos, mode, registry, st.local_types,
                                 st.known_non_null));
                warnOnDispatchTies(st, *c, s.pos);
            } else if (const auto* a = std::get_if<AssignStmt>(&s.node)) {
                handleAssign(*a, s.pos, st);
            } else if (const auto* f = std::get_if<IfStmt>(&s.node)) {
                // Branch gains (assurance, locals) are dropped at the join.
                if (const auto* nn = std::get_if<NotNullCond>(&f->cond)) {
                    withNonNull(st, nn->var, f->then_body);
                    CheckState else_state = st;
                    walk(f->else_body, else_state);
                } else if (const auto* in = std::get_if<IsNullCond>(&f->cond)) {
                    CheckState then_state = st;
                    walk(f->then_body, then_state);
                    withNonNull(st, in->var, f->else_body);
                } else {
                    CheckState then_state = st;
                    walk(f->then_body, then_state);
                    CheckState else_state = st;
                    walk(f->else_body, else_state);
                }
            } else if (const auto* w = std::get_if<WhileStmt>(&s.node)) {
                if (const auto* nn = std::get_if<NotNullCond>(&w->cond)) {
                    withNonNull(st, nn->var, w->body);
                } else {
                    CheckState body_state = st;
                    walk(w->body, body_state);
                }
            } else if (std::holds_alternative<ReturnStmt>(s.node) ||
                       std::holds_alternative<FailStmt>(s.node)) {
                return; // statements after a terminator are dead
            }
            // deref carries no static obligation; runtime nulls are the
            // dynamic tracer's concern
        }
    }

    void run() {
        CheckState st;
        st.pool = entryPool(method, registry);
        for (const auto& p : method.params) {
            if (p.kind == ParamKind::Value) {
                st.value_vars.insert(p.name);
                continue;
            }
            st.local_types[p.name] = DeclType{p.type_name, p.type_name, p.nullability};
            if (p.nullability == Nullability::Required) st.known_non_null.insert(p.name);
        }
        walk(method.body, st);
    }
};

} // namespace

DiagnosticList checkProgram(const Program& p, const Registry& registry, CheckMode mode) {
    DiagnosticList diags;
    for (const auto& m : p.methods) {
        ProgramChecker checker{registry, mode, m, diags};
        checker.run();
    }
    sortDiagnostics(diags);
    return diags;
}

} // namespace mol
