#include "mol/oracle.hpp"

#include <cassert>
#include <variant>

namespace mol {
namespace {

enum class Val { Null, Obj, Scalar };

struct LoopTask {
    const WhileStmt* loop;
    int copies_left;
};
struct SeqTask {
    const StmtList* list;
    size_t idx;
};
using Task = std::variant<SeqTask, LoopTask>;

struct Frame {
    const MethodDecl* impl;
    std::map<std::string, Val> vars;
    std::vector<Task> tasks;
};

struct Machine {
    std::vector<Frame> frames;
    std::map<AbstractionKey, int> active; // recursion accounting
};

struct Enumerator {
    const ProgramIndex& index;
    const OracleOptions& opts;

    long steps = 0;
    bool exhausted = false;
    bool saw_fail = false;
    bool saw_complete = false;

    bool done() const {
        return exhausted || (saw_fail && saw_complete); // mixed: already Possibly
    }

    static std::pair<bool, bool> condOutcomes(const Cond& c,
                                              const std::map<std::string, Val>& vars) {
        if (std::holds_alternative<OpaqueCond>(c)) return {true, true};
        const std::string& var = std::holds_alternative<IsNullCond>(c)
                                     ? std::get<IsNullCond>(c).var
                                     : std::get<NotNullCond>(c).var;
        bool is_null = vars.at(var) == Val::Null;
        bool truth = std::holds_alternative<IsNullCond>(c) ? is_null : !is_null;
        return {truth, !truth};
    }

    void pushCall(Machine& m, const AbstractionKey& key, const std::vector<Val>& args,
                  const MethodDecl* impl) {
        Frame f;
        f.impl = impl;
        for (size_t i = 0; i < impl->params.size(); ++i) f.vars[impl->params[i].name] = args[i];
        f.tasks.push_back(SeqTask{&impl->body, 0});
        m.frames.push_back(std::move(f));
        m.active[key] += 1;
    }

    void run(Machine m) {
        while (!done()) {
            if (++steps > opts.budget) {
                exhausted = true;
                return;
            }
            if (m.frames.empty()) {
                saw_complete = true;
                return;
            }
            Frame& frame = m.frames.back();
            if (frame.tasks.empty()) {
                m.active[frame.impl->key()] -= 1;
                m.frames.pop_back();
                continue;
            }
            if (auto* seq = std::get_if<SeqTask>(&frame.tasks.back())) {
                if (seq->idx >= seq->list->size()) {
                    frame.tasks.pop_back();
                    continue;
                }
                const Stmt& s = (*seq->list)[seq->idx];
                ++seq->idx;
                if (const auto* d = std::get_if<DerefStmt>(&s.node)) {
                    if (frame.vars.at(d->var) == Val::Null) {
                        saw_fail = true;
                        return;
                    }
                } else if (std::holds_alternative<FailStmt>(s.node)) {
                    saw_fail = true;
                    return;
                } else if (std::holds_alternative<ReturnStmt>(s.node)) {
                    m.active[frame.impl->key()] -= 1;
                    m.frames.pop_back();
                } else if (const auto* a = std::get_if<AssignStmt>(&s.node)) {
                    if (std::holds_alternative<NullLit>(a->value))
                        frame.vars[a->var] = Val::Null;
                    else if (std::holds_alternative<NewExpr>(a->value))
                        frame.vars[a->var] = Val::Obj;
                    else if (std::holds_alternative<OpaqueExpr>(a->value))
                        frame.vars[a->var] = Val::Scalar;
                    else
                        frame.vars[a->var] = frame.vars.at(std::get<VarExpr>(a->value).name);
                } else if (const auto* c = std::get_if<CallStmt>(&s.node)) {
                    const AbstractionKey* key = index.resolveCall(c->method, int(c->args.size()));
                    assert(key);
                    if (m.active[*key] >= 1) continue; // re-entry skipped
                    std::vector<Val> args;
                    args.reserve(c->args.size());
                    for (const auto& arg : c->args)
                        args.push_back(arg.is_null ? Val::Null : frame.vars.at(arg.var));
                    const auto& impls = index.implementations.at(*key);
                    // Dispatch is a nondeterministic choice over every
                    // implementation; the classification merges over the
                    // abstraction exactly like the fixpoint environment.
                    for (size_t i = 0; i + 1 < impls.size(); ++i) {
                        Machine forked = m;
                        pushCall(forked, *key, args, impls[i]);
                        run(std::move(forked));
                        if (done()) return;
                    }
                    pushCall(m, *key, args, impls.back());
                } else if (const auto* f = std::get_if<IfStmt>(&s.node)) {
                    auto [true_ok, false_ok] = condOutcomes(f->cond, frame.vars);
                    if (true_ok && false_ok) {
                        Machine forked = m;
                        forked.frames.back().tasks.push_back(SeqTask{&f->then_body, 0});
                        run(std::move(forked));
                        if (done()) return;
                        frame.tasks.push_back(SeqTask{&f->else_body, 0});
                    } else if (true_ok) {
                        frame.tasks.push_back(SeqTask{&f->then_body, 0});
                    } else {
                        frame.tasks.push_back(SeqTask{&f->else_body, 0});
                    }
                } else if (const auto* w = std::get_if<WhileStmt>(&s.node)) {
                    frame.tasks.push_back(LoopTask{w, opts.loop_bound});
                }
                continue;
            }
            auto& loop = std::get<LoopTask>(frame.tasks.back());
            auto [true_ok, false_ok] = condOutcomes(loop.loop->cond, frame.vars);
            (void)false_ok;
            bool can_enter = true_ok && loop.copies_left > 0;
            if (can_enter) {
                Machine forked = m;
                auto& ftasks = forked.frames.back().tasks;
                std::get<LoopTask>(ftasks.back()).copies_left -= 1;
                ftasks.push_back(SeqTask{&loop.loop->body, 0});
                run(std::move(forked));
                if (done()) return;
            }
            frame.tasks.pop_back(); // exit the loop
        }
    }
};

} // namespace

OracleResult oracleClassify(const Program& p, const ProgramIndex& index,
                            const AbstractionKey& method, int param_index,
                            const OracleOptions& opts) {
    (void)p;
    auto it = index.implementations.find(method);
    assert(it != index.implementations.end() && "oracle target must exist");
    assert(param_index >= 0 && param_index < method.arity() &&
           method.type_row[size_t(param_index)] != "val");

    Enumerator en{index, opts};
    for (const MethodDecl* impl : it->second) {
        std::vector<Val> args;
        for (size_t i = 0; i < impl->params.size(); ++i) {
            if (impl->params[i].kind == ParamKind::Value)
                args.push_back(Val::Scalar);
            else
                args.push_back(int(i) == param_index ? Val::Null : Val::Obj);
        }
        Machine m;
        en.pushCall(m, method, args, impl);
        en.run(std::move(m));
        if (en.done()) break;
    }
    OracleResult result;
    if (en.exhausted) {
        result.feasible = false;
        return result;
    }
    result.feasible = true;
    if (en.saw_fail && en.saw_complete)
        result.cls = NullabilityClass::PossiblyRequired;
    else if (en.saw_fail)
        result.cls = NullabilityClass::DefinitelyRequired;
    else
        result.cls = NullabilityClass::NotLocallyRequired;
    return result;
}

} // namespace mol
