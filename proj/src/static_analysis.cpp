#include "mol/static_analysis.hpp"

#include <cassert>
#include <numeric>
#include <sstream>

#include "mol/csv.hpp"

namespace mol {

NullabilityClass chainJoin(NullabilityClass a, NullabilityClass b) {
    return a > b ? a : b;
}

const char* nullabilityClassName(NullabilityClass c) {
    switch (c) {
        case NullabilityClass::NotLocallyRequired: return "not_locally_required";
        case NullabilityClass::PossiblyRequired: return "possibly_required";
        case NullabilityClass::DefinitelyRequired: return "definitely_required";
    }
    return "?";
}

std::optional<NullabilityClass> nullabilityClassFromName(const std::string& name) {
    if (name == "not_locally_required") return NullabilityClass::NotLocallyRequired;
    if (name == "possibly_required") return NullabilityClass::PossiblyRequired;
    if (name == "definitely_required") return NullabilityClass::DefinitelyRequired;
    return std::nullopt;
}

namespace {

// Per-path value knowledge under the hypothesis "parameter P entered null".
// Every reference value in MOL is exactly one of these on a given path:
// sources are parameter entries, null literals, new, and copies.
enum class Flow {
    ParamNull, // holds P's null entry value
    OtherNull, // null, but not P's entry value
    NonNull,   // fresh object or another parameter's entry
    Scalar,    // value-typed
};

struct PathEnumerator {
    const ProgramIndex& index;
    const AnalysisOptions& opts;

    long enumerated = 0;
    bool overflow = false;

    PathSet paths;
    // Partial evidence kept for the fallback summary.
    bool any_local_fail = false;
    std::set<std::pair<AbstractionKey, int>> seen_deps;

    struct LoopTask {
        const WhileStmt* loop;
        int copies_left;
    };
    struct SeqTask {
        const StmtList* list;
        size_t idx;
    };
    using Task = std::variant<SeqTask, LoopTask>;

    using VarState = std::map<std::string, Flow>;

    void emit(PathSummary path) {
        ++enumerated;
        if (enumerated > opts.max_paths) {
            overflow = true;
            return;
        }
        if (path.local_fail) any_local_fail = true;
        for (const auto& u : path.uses) seen_deps.insert({u.callee, u.position});
        paths.paths.insert(std::move(path));
    }

    static bool isNullFlow(Flow f) { return f == Flow::ParamNull || f == Flow::OtherNull; }

    // True branch feasible / false branch feasible for a condition.
    std::pair<bool, bool> condOutcomes(const Cond& c, const VarState& vars) const {
        if (std::holds_alternative<OpaqueCond>(c)) return {true, true};
        const std::string& var = std::holds_alternative<IsNullCond>(c)
                                     ? std::get<IsNullCond>(c).var
                                     : std::get<NotNullCond>(c).var;
        auto it = vars.find(var);
        assert(it != vars.end() && "validated methods assign before use");
        bool is_null = isNullFlow(it->second);
        bool truth = std::holds_alternative<IsNullCond>(c) ? is_null : !is_null;
        return {truth, !truth};
    }

    void run(std::vector<Task> tasks, VarState vars, PathSummary cur) {
        while (!overflow) {
            if (tasks.empty()) {
                emit(std::move(cur));
                return;
            }
            if (auto* seq = std::get_if<SeqTask>(&tasks.back())) {
                if (seq->idx >= seq->list->size()) {
                    tasks.pop_back();
                    continue;
                }
                const Stmt& s = (*seq->list)[seq->idx];
                ++seq->idx;
                if (const auto* d = std::get_if<DerefStmt>(&s.node)) {
                    Flow f = vars.at(d->var);
                    if (isNullFlow(f)) {
                        cur.local_fail = true;
                        emit(std::move(cur));
                        return;
                    }
                } else if (std::holds_alternative<FailStmt>(s.node)) {
                    cur.local_fail = true;
                    emit(std::move(cur));
                    return;
                } else if (std::holds_alternative<ReturnStmt>(s.node)) {
                    emit(std::move(cur));
                    return;
                } else if (const auto* a = std::get_if<AssignStmt>(&s.node)) {
                    if (std::holds_alternative<NullLit>(a->value)) {
                        vars[a->var] = Flow::OtherNull;
                    } else if (std::holds_alternative<NewExpr>(a->value)) {
                        vars[a->var] = Flow::NonNull;
                    } else if (std::holds_alternative<OpaqueExpr>(a->value)) {
                        vars[a->var] = Flow::Scalar;
                    } else {
                        vars[a->var] = vars.at(std::get<VarExpr>(a->value).name);
                    }
                } else if (const auto* c = std::get_if<CallStmt>(&s.node)) {
                    const AbstractionKey* key = index.resolveCall(c->method, int(c->args.size()));
                    assert(key && "validated programs resolve every call");
                    for (size_t i = 0; i < c->args.size(); ++i) {
                        if (c->args[i].is_null) continue;
                        if (key->type_row[i] == "val") continue;
                        if (vars.at(c->args[i].var) == Flow::ParamNull)
                            cur.uses.insert({*key, int(i)});
                    }
                } else if (const auto* f = std::get_if<IfStmt>(&s.node)) {
                    auto [true_ok, false_ok] = condOutcomes(f->cond, vars);
                    if (true_ok && false_ok) {
                        // Fork: run the then side in a fresh machine, keep
                        // going on the else side here.
                        auto then_tasks = tasks;
                        then_tasks.push_back(SeqTask{&f->then_body, 0});
                        run(std::move(then_tasks), vars, cur);
                        if (overflow) return;
                        tasks.push_back(SeqTask{&f->else_body, 0});
                    } else if (true_ok) {
                        tasks.push_back(SeqTask{&f->then_body, 0});
                    } else {
                        tasks.push_back(SeqTask{&f->else_body, 0});
                    }
                } else if (const auto* w = std::get_if<WhileStmt>(&s.node)) {
                    tasks.push_back(LoopTask{w, opts.loop_bound});
                }
                continue;
            }
            auto& loop = std::get<LoopTask>(tasks.back());
            auto [true_ok, false_ok] = condOutcomes(loop.loop->cond, vars);
            (void)false_ok;
            // The exit is always available: loop bodies contribute
            // optionally, so no claim ever rests on loop-only events.
            bool can_enter = true_ok && loop.copies_left > 0;
            if (can_enter) {
                auto enter_tasks = tasks;
                std::get<LoopTask>(enter_tasks.back()).copies_left -= 1;
                enter_tasks.push_back(SeqTask{&loop.loop->body, 0});
                run(std::move(enter_tasks), vars, cur);
                if (overflow) return;
            }
            tasks.pop_back(); // exit the loop
        }
    }
};

// Does the method fail unconditionally before its first branch under the
// hypothesis? Straight-line walk; used for the fallback summary only.
bool failsBeforeFirstBranch(const MethodDecl& m, int param_index) {
    std::map<std::string, Flow> vars;
    for (size_t i = 0; i < m.params.size(); ++i) {
        const Param& p = m.params[i];
        if (p.kind == ParamKind::Value)
            vars[p.name] = Flow::Scalar;
        else
            vars[p.name] = int(i) == param_index ? Flow::ParamNull : Flow::NonNull;
    }
    for (const auto& s : m.body) {
        if (const auto* d = std::get_if<DerefStmt>(&s.node)) {
            Flow f = vars.at(d->var);
            if (PathEnumerator::isNullFlow(f)) return true;
        } else if (std::holds_alternative<FailStmt>(s.node)) {
            return true;
        } else if (const auto* a = std::get_if<AssignStmt>(&s.node)) {
            if (std::holds_alternative<NullLit>(a->value))
                vars[a->var] = Flow::OtherNull;
            else if (std::holds_alternative<NewExpr>(a->value))
                vars[a->var] = Flow::NonNull;
            else if (std::holds_alternative<OpaqueExpr>(a->value))
                vars[a->var] = Flow::Scalar;
            else
                vars[a->var] = vars.at(std::get<VarExpr>(a->value).name);
        } else if (std::holds_alternative<ReturnStmt>(s.node)) {
            return false;
        } else {
            return false; // call, if, while: branching or external effects
        }
    }
    return false;
}

} // namespace

MethodTransfer summarizeMethod(const MethodDecl& m, const ProgramIndex& index,
                               const AnalysisOptions& opts) {
    assert(opts.loop_bound >= 0 && opts.max_paths >= 1);
    MethodTransfer t;
    t.method = m.key();
    t.implementation = m.qualifiedName();
    for (size_t pi = 0; pi < m.params.size(); ++pi) {
        if (m.params[pi].kind != ParamKind::Reference) continue;
        PathEnumerator en{index, opts};
        PathEnumerator::VarState vars;
        for (size_t i = 0; i < m.params.size(); ++i) {
            const Param& p = m.params[i];
            if (p.kind == ParamKind::Value)
                vars[p.name] = Flow::Scalar;
            else
                vars[p.name] = i == pi ? Flow::ParamNull : Flow::NonNull;
        }
        en.run({PathEnumerator::SeqTask{&m.body, 0}}, std::move(vars), {});
        if (en.overflow) {
            FallbackSummary fb;
            if (failsBeforeFirstBranch(m, int(pi)))
                fb.local = NullabilityClass::DefinitelyRequired;
            else if (en.any_local_fail)
                fb.local = NullabilityClass::PossiblyRequired;
            else
                fb.local = NullabilityClass::NotLocallyRequired;
            fb.dependencies = std::move(en.seen_deps);
            t.per_param.emplace(int(pi), std::move(fb));
            t.budget_exceeded = true;
        } else {
            assert(!en.paths.paths.empty());
            t.per_param.emplace(int(pi), std::move(en.paths));
        }
    }
    return t;
}

std::map<int, NullabilityClass> evaluateTransfer(const MethodTransfer& t,
                                                 const Environment& env) {
    std::map<int, NullabilityClass> out;
    for (const auto& [idx, summary] : t.per_param) {
        if (const auto* ps = std::get_if<PathSet>(&summary)) {
            bool all_fail = true, all_ok = true;
            for (const auto& path : ps->paths) {
                bool fail = path.local_fail;
                bool maybe = false;
                for (const auto& use : path.uses) {
                    auto it = env.find({use.callee, use.position});
                    assert(it != env.end() && "environment must cover every callee use");
                    if (it->second == NullabilityClass::DefinitelyRequired) fail = true;
                    else if (it->second == NullabilityClass::PossiblyRequired) maybe = true;
                }
                if (fail) {
                    all_ok = false;
                } else if (maybe) {
                    all_ok = false;
                    all_fail = false;
                } else {
                    all_fail = false;
                }
            }
            NullabilityClass c = all_fail ? NullabilityClass::DefinitelyRequired
                                 : all_ok ? NullabilityClass::NotLocallyRequired
                                          : NullabilityClass::PossiblyRequired;
            out.emplace(idx, c);
        } else {
            const auto& fb = std::get<FallbackSummary>(summary);
            NullabilityClass dep_class = NullabilityClass::NotLocallyRequired;
            for (const auto& dep : fb.dependencies) {
                auto it = env.find(dep);
                assert(it != env.end() && "environment must cover every dependency");
                if (it->second != NullabilityClass::NotLocallyRequired) {
                    dep_class = NullabilityClass::PossiblyRequired;
                    break;
                }
            }
            out.emplace(idx, chainJoin(fb.local, dep_class));
        }
    }
    return out;
}

StaticResult fixpointAnalyzeOrdered(const Program& p, const ProgramIndex& index,
                                    const AnalysisOptions& opts,
                                    const std::vector<int>& order,
                                    std::vector<Environment>* history) {
    std::vector<MethodTransfer> transfers;
    transfers.reserve(p.methods.size());
    for (const auto& m : p.methods) transfers.push_back(summarizeMethod(m, index, opts));

    StaticResult result;
    result.options = opts;
    Environment env;
    for (const auto& t : transfers) {
        if (t.budget_exceeded) result.path_budget_exceeded.insert(t.method);
        for (const auto& [idx, _] : t.per_param)
            env.emplace(std::make_pair(t.method, idx), NullabilityClass::NotLocallyRequired);
    }
    if (history) history->push_back(env);

    bool changed = true;
    while (changed) {
        ++result.iterations;
        Environment next;
        for (const auto& [k, _] : env) next.emplace(k, NullabilityClass::NotLocallyRequired);
        for (int mi : order) {
            const MethodTransfer& t = transfers[size_t(mi)];
            auto evaluated = evaluateTransfer(t, env);
            for (const auto& [idx, c] : evaluated) {
                auto& slot = next.at({t.method, idx});
                slot = chainJoin(slot, c);
            }
        }
        changed = next != env;
        env = std::move(next);
        if (history) history->push_back(env);
    }
    result.classes = std::move(env);
    return result;
}

StaticResult fixpointAnalyze(const Program& p, const ProgramIndex& index,
                             const AnalysisOptions& opts) {
    std::vector<int> order(p.methods.size());
    std::iota(order.begin(), order.end(), 0);
    return fixpointAnalyzeOrdered(p, index, opts, order, nullptr);
}

std::string MethodTransfer::str() const {
    std::ostringstream os;
    os << implementation << " [" << method.str() << "]";
    if (budget_exceeded) os << " budget-exceeded";
    os << "\n";
    for (const auto& [idx, summary] : per_param) {
        os << "  param " << idx << ": ";
        if (const auto* ps = std::get_if<PathSet>(&summary)) {
            os << "paths{";
            bool first_path = true;
            for (const auto& path : ps->paths) {
                if (!first_path) os << ", ";
                first_path = false;
                os << "{";
                bool first = true;
                if (path.local_fail) {
                    os << "local-fail";
                    first = false;
                }
                for (const auto& u : path.uses) {
                    if (!first) os << " ";
                    first = false;
                    os << u.callee.str() << "@" << u.position;
                }
                os << "}";
            }
            os << "}";
        } else {
            const auto& fb = std::get<FallbackSummary>(summary);
            os << "fallback local=" << nullabilityClassName(fb.local) << " deps{";
            bool first = true;
            for (const auto& d : fb.dependencies) {
                if (!first) os << " ";
                first = false;
                os << d.first.str() << "@" << d.second;
            }
            os << "}";
        }
        os << "\n";
    }
    return os.str();
}

std::string StaticResult::toCsv() const {
    std::string out = "# loop_bound=" + std::to_string(options.loop_bound) +
                      ",max_paths=" + std::to_string(options.max_paths) +
                      ",sweeps=" + std::to_string(iterations) + "\n";
    out += "method,param_index,class\n";
    for (const auto& [key, c] : classes) {
        out += csvLine({key.first.str(), std::to_string(key.second), nullabilityClassName(c)});
        out += '\n';
    }
    return out;
}

std::string StaticResult::toText() const {
    std::ostringstream os;
    os << "static nullability (loop_bound=" << options.loop_bound
       << ", max_paths=" << options.max_paths << ", sweeps=" << iterations << ")\n";
    for (const auto& [key, c] : classes)
        os << "  " << key.first.str() << " #" << key.second << " -> "
           << nullabilityClassName(c) << "\n";
    if (!path_budget_exceeded.empty()) {
        os << "budget exceeded:";
        for (const auto& k : path_budget_exceeded) os << ' ' << k.str();
        os << "\n";
    }
    return os.str();
}

namespace {

// "name(T1,T2,val)" -> AbstractionKey; inverse of AbstractionKey::str().
std::optional<AbstractionKey> parseKeyString(const std::string& s) {
    auto lp = s.find('(');
    if (lp == std::string::npos || s.empty() || s.back() != ')') return std::nullopt;
    AbstractionKey key;
    key.name = s.substr(0, lp);
    std::string inner = s.substr(lp + 1, s.size() - lp - 2);
    if (!inner.empty()) {
        size_t start = 0;
        while (true) {
            size_t comma = inner.find(',', start);
            if (comma == std::string::npos) {
                key.type_row.push_back(inner.substr(start));
                break;
            }
            key.type_row.push_back(inner.substr(start, comma - start));
            start = comma + 1;
        }
    }
    return key;
}

} // namespace

std::optional<StaticResult> parseStaticResultCsv(const std::string& text,
                                                 DiagnosticList& diags) {
    StaticResult result;
    auto lines = splitLines(text);
    size_t first = 0;
    if (!lines.empty() && !lines[0].empty() && lines[0][0] == '#') {
        // header comment: "# loop_bound=N,max_paths=N,sweeps=N"
        std::string header = lines[0].substr(1);
        std::istringstream hs(header);
        std::string field;
        while (std::getline(hs, field, ',')) {
            auto eq = field.find('=');
            if (eq == std::string::npos) continue;
            std::string k = field.substr(0, eq);
            while (!k.empty() && k.front() == ' ') k.erase(k.begin());
            long v = std::strtol(field.c_str() + eq + 1, nullptr, 10);
            if (k == "loop_bound") result.options.loop_bound = int(v);
            else if (k == "max_paths") result.options.max_paths = v;
            else if (k == "sweeps") result.iterations = int(v);
        }
        first = 1;
    }
    if (first < lines.size() && lines[first] == "method,param_index,class") ++first;
    for (size_t i = first; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto fields = csvSplit(lines[i]);
        if (fields.size() != 3) {
            diags.push_back({Severity::Error, "malformed-csv", {"", int(i + 1), 1}, "",
                             "expected 3 fields in static result row"});
            return std::nullopt;
        }
        auto key = parseKeyString(fields[0]);
        auto cls = nullabilityClassFromName(fields[2]);
        if (!key || !cls) {
            diags.push_back({Severity::Error, "malformed-csv", {"", int(i + 1), 1}, "",
                             "bad method key or class name"});
            return std::nullopt;
        }
        result.classes[{*key, std::stoi(fields[1])}] = *cls;
    }
    return result;
}

} // namespace mol
