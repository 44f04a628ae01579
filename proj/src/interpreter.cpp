#include "mol/interpreter.hpp"

#include <cassert>
#include <sstream>
#include <variant>

#include "mol/csv.hpp"
#include "mol/rng.hpp"

namespace mol {

const char* runOutcomeName(RunOutcome o) {
    switch (o) {
        case RunOutcome::Completed: return "completed";
        case RunOutcome::NullDerefFailure: return "null_deref";
        case RunOutcome::ExplicitFailure: return "explicit_fail";
        case RunOutcome::StepLimit: return "step_limit";
    }
    return "?";
}

namespace {

struct Value {
    enum class Tag { Null, Object, Scalar } tag = Tag::Null;
    long object_id = 0;
    std::string classifier; // for objects
    uint64_t token = 0;     // for scalars
};

struct LoopMark {
    const WhileStmt* loop;
};
struct SeqMark {
    const StmtList* list;
    size_t idx;
};
using Task = std::variant<SeqMark, LoopMark>;

struct Frame {
    const MethodDecl* impl;
    std::map<std::string, Value> vars;
    std::vector<Task> tasks;
};

} // namespace

const MethodDecl* dispatchImplementation(const ProgramIndex& index, const AbstractionKey& key,
                                         const std::string* first_arg_classifier) {
    const auto& impls = index.implementations.at(key);
    assert(!impls.empty());
    const MethodDecl* best = nullptr;
    int best_rank = -1; // smaller is better; -1 = none yet
    for (const MethodDecl* impl : impls) {
        int rank;
        if (!impl->owner) {
            rank = 1'000'000; // free-standing: least specific match
        } else if (first_arg_classifier) {
            auto cls = index.classes.find(*impl->owner);
            assert(cls != index.classes.end());
            int dist = index.ancestryDistance(cls->second->classifier, *first_arg_classifier);
            if (dist < 0) continue;
            rank = dist;
        } else {
            continue;
        }
        if (!best || rank < best_rank) {
            best = impl;
            best_rank = rank;
        }
    }
    return best ? best : impls.front(); // declaration-order fallback
}

ExecutionTrace runProgram(const Program& p, const ProgramIndex& index,
                          const std::string& entry, uint64_t seed, long step_limit) {
    (void)p;
    ExecutionTrace trace;
    trace.seed = seed;

    const MethodDecl* entry_decl = index.findMethod(entry);
    assert(entry_decl && "caller must resolve the entry before running");

    SplitMix64 rng(seed);
    long next_object_id = 1;
    auto freshObject = [&](const std::string& classifier) {
        Value v;
        v.tag = Value::Tag::Object;
        v.object_id = next_object_id++;
        v.classifier = classifier;
        return v;
    };
    auto freshScalar = [&] {
        Value v;
        v.tag = Value::Tag::Scalar;
        v.token = rng.next();
        return v;
    };

    std::vector<Frame> frames;
    {
        Frame f;
        f.impl = entry_decl;
        for (const auto& param : entry_decl->params) {
            if (param.kind == ParamKind::Value)
                f.vars[param.name] = freshScalar();
            else if (param.nullability == Nullability::Required)
                f.vars[param.name] = freshObject(param.type_name);
            else
                f.vars[param.name] = Value{}; // null
        }
        f.tasks.push_back(SeqMark{&entry_decl->body, 0});
        frames.push_back(std::move(f));
    }

    long steps = 0;
    while (true) {
        if (frames.empty()) {
            trace.outcome = RunOutcome::Completed;
            break;
        }
        Frame& frame = frames.back();
        if (frame.tasks.empty()) {
            frames.pop_back();
            continue;
        }
        if (auto* loop = std::get_if<LoopMark>(&frame.tasks.back())) {
            // Re-evaluating the loop condition counts as executing the
            // while statement again.
            if (steps >= step_limit) {
                trace.outcome = RunOutcome::StepLimit;
                break;
            }
            ++steps;
            const WhileStmt* w = loop->loop;
            bool truth;
            if (std::holds_alternative<OpaqueCond>(w->cond)) {
                truth = rng.nextBool();
            } else if (const auto* is_null = std::get_if<IsNullCond>(&w->cond)) {
                truth = frame.vars.at(is_null->var).tag == Value::Tag::Null;
            } else {
                truth = frame.vars.at(std::get<NotNullCond>(w->cond).var).tag !=
                        Value::Tag::Null;
            }
            if (truth) {
                frame.tasks.push_back(SeqMark{&w->body, 0});
            } else {
                frame.tasks.pop_back();
            }
            continue;
        }
        auto* seq = std::get_if<SeqMark>(&frame.tasks.back());
        if (seq->idx >= seq->list->size()) {
            frame.tasks.pop_back();
            continue;
        }
        const Stmt& s = (*seq->list)[seq->idx];
        ++seq->idx;
        if (steps >= step_limit) {
            trace.outcome = RunOutcome::StepLimit;
            break;
        }
        ++steps;

        if (const auto* d = std::get_if<DerefStmt>(&s.node)) {
            if (frame.vars.at(d->var).tag == Value::Tag::Null) {
                trace.outcome = RunOutcome::NullDerefFailure;
                trace.failure_location = s.pos;
                break;
            }
        } else if (std::holds_alternative<FailStmt>(s.node)) {
            trace.outcome = RunOutcome::ExplicitFailure;
            trace.failure_location = s.pos;
            break;
        } else if (std::holds_alternative<ReturnStmt>(s.node)) {
            frames.pop_back();
        } else if (const auto* a = std::get_if<AssignStmt>(&s.node)) {
            if (std::holds_alternative<NullLit>(a->value))
                frame.vars[a->var] = Value{};
            else if (const auto* n = std::get_if<NewExpr>(&a->value))
                frame.vars[a->var] = freshObject(n->classifier);
            else if (std::holds_alternative<OpaqueExpr>(a->value))
                frame.vars[a->var] = freshScalar();
            else
                frame.vars[a->var] = frame.vars.at(std::get<VarExpr>(a->value).name);
        } else if (const auto* c = std::get_if<CallStmt>(&s.node)) {
            const AbstractionKey* key = index.resolveCall(c->method, int(c->args.size()));
            assert(key);
            std::vector<Value> args;
            args.reserve(c->args.size());
            for (const auto& arg : c->args)
                args.push_back(arg.is_null ? Value{} : frame.vars.at(arg.var));

            const std::string* first_classifier = nullptr;
            if (!args.empty() && args[0].tag == Value::Tag::Object)
                first_classifier = &args[0].classifier;
            const MethodDecl* impl = dispatchImplementation(index, *key, first_classifier);

            CallRecord rec;
            rec.abstraction = *key;
            rec.implementation = impl->qualifiedName();
            for (size_t i = 0; i < args.size(); ++i)
                if (key->type_row[i] != "val")
                    rec.arg_null.push_back(args[i].tag == Value::Tag::Null ? 1 : 0);
            trace.records.push_back(std::move(rec));

            Frame callee;
            callee.impl = impl;
            for (size_t i = 0; i < impl->params.size(); ++i)
                callee.vars[impl->params[i].name] = args[i];
            callee.tasks.push_back(SeqMark{&impl->body, 0});
            frames.push_back(std::move(callee));
        } else if (const auto* f = std::get_if<IfStmt>(&s.node)) {
            bool truth;
            if (std::holds_alternative<OpaqueCond>(f->cond)) {
                truth = rng.nextBool();
            } else if (const auto* is_null = std::get_if<IsNullCond>(&f->cond)) {
                truth = frame.vars.at(is_null->var).tag == Value::Tag::Null;
            } else {
                truth = frame.vars.at(std::get<NotNullCond>(f->cond).var).tag !=
                        Value::Tag::Null;
            }
            frame.tasks.push_back(SeqMark{truth ? &f->then_body : &f->else_body, 0});
        } else if (const auto* w = std::get_if<WhileStmt>(&s.node)) {
            // The first condition evaluation was paid for by this step.
            bool truth;
            if (std::holds_alternative<OpaqueCond>(w->cond)) {
                truth = rng.nextBool();
            } else if (const auto* is_null = std::get_if<IsNullCond>(&w->cond)) {
                truth = frame.vars.at(is_null->var).tag == Value::Tag::Null;
            } else {
                truth = frame.vars.at(std::get<NotNullCond>(w->cond).var).tag !=
                        Value::Tag::Null;
            }
            frame.tasks.push_back(LoopMark{w});
            if (truth) {
                frame.tasks.push_back(SeqMark{&w->body, 0});
            } else {
                frame.tasks.pop_back();
            }
        }
    }

    trace.total_calls = long(trace.records.size());
    return trace;
}

std::string ExecutionTrace::serialize() const {
    std::ostringstream os;
    for (const auto& rec : records) {
        os << rec.abstraction.str() << '\t' << rec.implementation << '\t';
        for (uint8_t b : rec.arg_null) os << (b ? '1' : '0');
        os << '\n';
    }
    os << "# outcome=" << runOutcomeName(outcome) << " seed=" << seed
       << " total_calls=" << total_calls;
    if (outcome == RunOutcome::NullDerefFailure || outcome == RunOutcome::ExplicitFailure) {
        os << " location=" << failure_location.file << ':' << failure_location.line << ':'
           << failure_location.col;
    }
    os << '\n';
    return os.str();
}

DynamicProfile aggregateTrace(const std::vector<ExecutionTrace>& traces, const Program& p,
                              DiagnosticList& diags) {
    std::map<AbstractionKey, const MethodDecl*> known;
    for (const auto& m : p.methods) known.emplace(m.key(), &m);

    DynamicProfile profile;
    for (const auto& trace : traces) {
        for (const auto& rec : trace.records) {
            if (!known.count(rec.abstraction)) {
                diags.push_back({Severity::Error, "unknown-abstraction", {}, "",
                                 "trace records a call to '" + rec.abstraction.str() +
                                     "' which the program does not declare"});
                continue;
            }
            auto& entry = profile.per_abstraction[rec.abstraction];
            if (entry.never_null.empty())
                entry.never_null.assign(rec.arg_null.size(), 1);
            assert(entry.never_null.size() == rec.arg_null.size());
            entry.call_count += 1;
            for (size_t i = 0; i < rec.arg_null.size(); ++i)
                if (rec.arg_null[i]) entry.never_null[i] = 0;
            entry.implementations_seen.insert(rec.implementation);
        }
    }
    return profile;
}

std::string DynamicProfile::toCsv() const {
    std::string out = "abstraction,ref_param_count,call_count,never_null_bitstring\n";
    for (const auto& [key, entry] : per_abstraction) {
        std::string bits;
        for (uint8_t b : entry.never_null) bits += b ? '1' : '0';
        out += csvLine({key.str(), std::to_string(key.refParamCount()),
                        std::to_string(entry.call_count), bits});
        out += '\n';
    }
    return out;
}

std::optional<DynamicProfile> parseProfileCsv(const std::string& text, DiagnosticList& diags) {
    DynamicProfile profile;
    auto lines = splitLines(text);
    size_t first = 0;
    if (!lines.empty() && lines[0] == "abstraction,ref_param_count,call_count,never_null_bitstring")
        first = 1;
    for (size_t i = first; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto fields = csvSplit(lines[i]);
        if (fields.size() != 4) {
            diags.push_back({Severity::Error, "malformed-csv", {"", int(i + 1), 1}, "",
                             "expected 4 fields in profile row"});
            return std::nullopt;
        }
        auto lp = fields[0].find('(');
        if (lp == std::string::npos || fields[0].back() != ')') {
            diags.push_back({Severity::Error, "malformed-csv", {"", int(i + 1), 1}, "",
                             "bad abstraction key"});
            return std::nullopt;
        }
        AbstractionKey key;
        key.name = fields[0].substr(0, lp);
        std::string inner = fields[0].substr(lp + 1, fields[0].size() - lp - 2);
        size_t start = 0;
        while (!inner.empty()) {
            size_t comma = inner.find(',', start);
            if (comma == std::string::npos) {
                key.type_row.push_back(inner.substr(start));
                break;
            }
            key.type_row.push_back(inner.substr(start, comma - start));
            start = comma + 1;
        }
        DynamicProfile::PerAbstraction entry;
        entry.call_count = std::strtol(fields[2].c_str(), nullptr, 10);
        for (char c : fields[3]) entry.never_null.push_back(c == '1' ? 1 : 0);
        if (int(entry.never_null.size()) != std::stoi(fields[1])) {
            diags.push_back({Severity::Error, "malformed-csv", {"", int(i + 1), 1}, "",
                             "bitstring length does not match ref_param_count"});
            return std::nullopt;
        }
        profile.per_abstraction[key] = std::move(entry);
    }
    return profile;
}

} // namespace mol
