#include "mol/corpus.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "mol/csv.hpp"
#include "mol/rng.hpp"
#include "mol/validator.hpp"

namespace mol {
namespace {

enum class Shape { PD, PP, PN, Forward, Recursive };

struct MethodPlan {
    std::string name;
    int project = 0;
    std::vector<std::string> ref_types;
    bool has_value_param = false;
    std::vector<NullabilityClass> expected; // per reference position
    bool loop_free = true;
    std::vector<int> family_owners; // class indices when polymorphic, else empty
};

Stmt stmt(StmtNode node) {
    Stmt s;
    s.node = std::move(node);
    return s;
}

struct Generator {
    const CorpusSpec& spec;
    SplitMix64 rng;
    Program program;
    GroundTruth truth;

    int projects = 1;
    bool rich = false; // entries + polymorphism + opt qualifiers
    std::vector<double> project_weights;
    std::vector<std::vector<std::string>> base_classifiers; // per project
    std::vector<std::string> family_base;   // per project: classifier of family bases
    std::vector<std::string> family_derived1, family_derived2;
    std::vector<std::vector<MethodPlan>> per_project_plans;

    explicit Generator(const CorpusSpec& s) : spec(s), rng(s.seed) {}

    int pickProject() {
        double total = 0;
        for (double w : project_weights) total += w;
        double x = rng.nextUnit() * total;
        for (size_t i = 0; i < project_weights.size(); ++i) {
            x -= project_weights[i];
            if (x <= 0) return int(i);
        }
        return int(project_weights.size()) - 1;
    }

    int pickRefArity() {
        // Geometric-ish decay shaped like the measured arity columns.
        static const double weights[] = {0.56, 0.26, 0.11, 0.048, 0.0125, 0.0045, 0.0011,
                                         0.0005, 0.0002, 0.0001, 0.00005, 0.00002};
        int cap = spec.max_ref_params;
        double total = 0;
        for (int i = 0; i < cap; ++i) total += weights[std::min(i, 11)];
        double x = rng.nextUnit() * total;
        for (int i = 0; i < cap; ++i) {
            x -= weights[std::min(i, 11)];
            if (x <= 0) return i + 1;
        }
        return cap;
    }

    Shape pickShape() {
        double x = rng.nextUnit();
        if ((x -= spec.frac_pd) <= 0) return Shape::PD;
        if ((x -= spec.frac_pp) <= 0) return Shape::PP;
        if ((x -= spec.frac_pn) <= 0) return Shape::PN;
        if ((x -= spec.frac_forward) <= 0) return Shape::Forward;
        return Shape::Recursive;
    }

    std::string pickClassifier(int project) {
        const auto& pool = base_classifiers[size_t(project)];
        return pool[rng.nextBelow(pool.size())];
    }

    void declareTypes() {
        for (int p = 0; p < projects; ++p) {
            std::string tag = std::to_string(p);
            std::vector<std::string> bases;
            for (char suffix : {'a', 'b', 'c'}) {
                std::string name = "C" + tag + suffix;
                program.classifiers.push_back({name, {}, {}});
                bases.push_back(name);
            }
            base_classifiers.push_back(bases);
            family_base.push_back(bases[0]);
            std::string d1 = "D" + tag + "x";
            std::string d2 = "D" + tag + "y";
            program.classifiers.push_back({d1, {bases[0]}, {}});
            program.classifiers.push_back({d2, {bases[0]}, {}});
            family_derived1.push_back(d1);
            family_derived2.push_back(d2);
            if (rich) {
                // Family implementation classes; Impl0 owns base-classifier
                // bodies so conventional-mode ownership holds.
                program.classes.push_back({"Impl" + tag + "Base", bases[0], {}, {}});
                ClassDecl c1{"Impl" + tag + "X", d1, {}, {}};
                c1.fields.push_back({"cache", bases[1], Nullability::Optional, {}});
                program.classes.push_back(c1);
                program.classes.push_back({"Impl" + tag + "Y", d2, {}, {}});
            }
        }
    }

    // Builds the body of one shape method over params p0..p{k-1} (+ optional
    // value param v). Fills plan.expected.
    StmtList buildBody(MethodPlan& plan, Shape shape, bool loop_wrap,
                       const MethodPlan* callee, bool mutual_gap,
                       const std::string& mutual_partner) {
        int k = int(plan.ref_types.size());
        plan.expected.assign(size_t(k), NullabilityClass::NotLocallyRequired);
        StmtList body;
        auto param = [](int i) { return "p" + std::to_string(i); };

        switch (shape) {
            case Shape::PD: {
                std::vector<int> derefs{0};
                for (int i = 1; i < k; ++i)
                    if (rng.nextBool()) derefs.push_back(i);
                if (loop_wrap) {
                    plan.loop_free = false;
                    WhileStmt w;
                    w.cond = OpaqueCond{};
                    w.body.push_back(stmt(DerefStmt{param(derefs[0])}));
                    body.push_back(stmt(std::move(w)));
                    plan.expected[size_t(derefs[0])] = NullabilityClass::PossiblyRequired;
                    for (size_t i = 1; i < derefs.size(); ++i) {
                        body.push_back(stmt(DerefStmt{param(derefs[i])}));
                        plan.expected[size_t(derefs[i])] = NullabilityClass::DefinitelyRequired;
                    }
                } else {
                    for (int d : derefs) {
                        body.push_back(stmt(DerefStmt{param(d)}));
                        plan.expected[size_t(d)] = NullabilityClass::DefinitelyRequired;
                    }
                }
                body.push_back(stmt(ReturnStmt{}));
                break;
            }
            case Shape::PP: {
                IfStmt f;
                f.cond = OpaqueCond{};
                f.then_body.push_back(stmt(DerefStmt{param(0)}));
                if (loop_wrap) {
                    plan.loop_free = false;
                    WhileStmt w;
                    w.cond = OpaqueCond{};
                    w.body.push_back(stmt(std::move(f)));
                    body.push_back(stmt(std::move(w)));
                } else {
                    body.push_back(stmt(std::move(f)));
                }
                plan.expected[0] = NullabilityClass::PossiblyRequired;
                body.push_back(stmt(ReturnStmt{}));
                break;
            }
            case Shape::PN: {
                if (rng.nextBool()) {
                    IfStmt f;
                    f.cond = NotNullCond{param(0)};
                    f.then_body.push_back(stmt(DerefStmt{param(0)}));
                    body.push_back(stmt(std::move(f)));
                }
                body.push_back(stmt(ReturnStmt{}));
                break;
            }
            case Shape::Forward: {
                assert(callee);
                plan.loop_free = callee->loop_free;
                int ck = int(callee->ref_types.size());
                CallStmt call;
                call.method = callee->name;
                for (int i = 0; i < ck; ++i) call.args.push_back({false, param(i)});
                if (callee->has_value_param) {
                    body.push_back(stmt(AssignStmt{"v0", OpaqueExpr{}}));
                    call.args.push_back({false, "v0"});
                }
                int flavor = int(rng.nextBelow(loop_wrap ? 2 : 3));
                if (loop_wrap) {
                    plan.loop_free = false;
                    flavor = flavor == 0 ? 3 : 1;
                }
                if (flavor == 0) {
                    // unconditional forward
                    body.push_back(stmt(std::move(call)));
                    for (int i = 0; i < ck; ++i) plan.expected[size_t(i)] = callee->expected[size_t(i)];
                } else if (flavor == 1) {
                    // conditional forward
                    IfStmt f;
                    f.cond = OpaqueCond{};
                    f.then_body.push_back(stmt(std::move(call)));
                    body.push_back(stmt(std::move(f)));
                    for (int i = 0; i < ck; ++i)
                        plan.expected[size_t(i)] =
                            callee->expected[size_t(i)] == NullabilityClass::NotLocallyRequired
                                ? NullabilityClass::NotLocallyRequired
                                : NullabilityClass::PossiblyRequired;
                } else if (flavor == 2) {
                    // deref the target-ish first param, then forward
                    body.push_back(stmt(DerefStmt{param(0)}));
                    body.push_back(stmt(std::move(call)));
                    plan.expected[0] = NullabilityClass::DefinitelyRequired;
                    for (int i = 1; i < ck; ++i) plan.expected[size_t(i)] = callee->expected[size_t(i)];
                } else {
                    // forward from inside a loop
                    WhileStmt w;
                    w.cond = OpaqueCond{};
                    w.body.push_back(stmt(std::move(call)));
                    body.push_back(stmt(std::move(w)));
                    for (int i = 0; i < ck; ++i)
                        plan.expected[size_t(i)] =
                            callee->expected[size_t(i)] == NullabilityClass::NotLocallyRequired
                                ? NullabilityClass::NotLocallyRequired
                                : NullabilityClass::PossiblyRequired;
                }
                body.push_back(stmt(ReturnStmt{}));
                break;
            }
            case Shape::Recursive: {
                plan.loop_free = false;
                bool def_rec = !mutual_gap && rng.nextBool();
                if (def_rec) {
                    body.push_back(stmt(DerefStmt{param(0)}));
                    plan.expected[0] = NullabilityClass::DefinitelyRequired;
                }
                CallStmt call;
                call.method = mutual_gap ? mutual_partner : plan.name;
                for (int i = 0; i < k; ++i) call.args.push_back({false, param(i)});
                if (plan.has_value_param) call.args.push_back({false, "v"});
                IfStmt f;
                f.cond = OpaqueCond{};
                f.then_body.push_back(stmt(std::move(call)));
                body.push_back(stmt(std::move(f)));
                body.push_back(stmt(ReturnStmt{}));
                break;
            }
        }
        return body;
    }

    MethodDecl planToDecl(const MethodPlan& plan, StmtList body,
                          const std::vector<Nullability>& quals,
                          std::optional<std::string> owner) {
        MethodDecl m;
        m.owner = std::move(owner);
        m.name = plan.name;
        for (size_t i = 0; i < plan.ref_types.size(); ++i) {
            Param p;
            p.name = "p" + std::to_string(i);
            p.kind = ParamKind::Reference;
            p.nullability = quals[i];
            p.type_name = plan.ref_types[i];
            m.params.push_back(std::move(p));
        }
        if (plan.has_value_param) {
            Param p;
            p.name = "v";
            p.kind = ParamKind::Value;
            m.params.push_back(std::move(p));
        }
        m.body = std::move(body);
        return m;
    }

    void recordTruth(const MethodPlan& plan, const MethodDecl& decl, int copies) {
        AbstractionKey key = decl.key();
        for (size_t i = 0; i < plan.expected.size(); ++i)
            truth.expected_class[{key, int(i)}] = plan.expected[i];
        int required = 0;
        for (auto c : plan.expected)
            if (c == NullabilityClass::DefinitelyRequired) ++required;
        truth.expected_crosstab.add(int(plan.expected.size()), required, copies);
        truth.project_of[key] = "proj" + std::to_string(plan.project);
        if (plan.loop_free) truth.loop_free.insert(key);
    }

    void generateMethods() {
        int counter = 0;
        per_project_plans.assign(size_t(projects), {});
        int budget = spec.method_count;
        while (budget > 0) {
            int project = pickProject();
            MethodPlan plan;
            plan.project = project;
            plan.name = "m" + std::to_string(counter++);
            int k = pickRefArity();
            plan.ref_types.resize(size_t(k));
            for (int i = 0; i < k; ++i) plan.ref_types[size_t(i)] = pickClassifier(project);
            plan.has_value_param = rng.nextUnit() < 0.25;

            Shape shape = pickShape();
            bool loop_wrap = (shape == Shape::PD || shape == Shape::PP ||
                              shape == Shape::Forward) &&
                             rng.nextUnit() < spec.loop_density;

            const MethodPlan* callee = nullptr;
            if (shape == Shape::Forward) {
                auto& pool = per_project_plans[size_t(project)];
                std::vector<const MethodPlan*> candidates;
                for (const auto& prior : pool)
                    if (int(prior.ref_types.size()) <= k && prior.family_owners.empty())
                        candidates.push_back(&prior);
                if (candidates.empty()) {
                    shape = Shape::PD;
                } else {
                    callee = candidates[rng.nextBelow(candidates.size())];
                    for (size_t i = 0; i < callee->ref_types.size(); ++i)
                        plan.ref_types[i] = callee->ref_types[i];
                }
            }

            bool mutual = shape == Shape::Recursive && budget >= 2 && rng.nextBool();
            bool family = rich && !mutual && budget >= 3 &&
                          (shape == Shape::PD || shape == Shape::PP || shape == Shape::PN) &&
                          rng.nextUnit() < 0.08;

            if (family) {
                // Same abstraction implemented by the base class and both
                // derived classes; uniform bodies keep the per-abstraction
                // classification single-valued.
                plan.name = "poly" + std::to_string(counter - 1);
                plan.ref_types[0] = family_base[size_t(project)];
                plan.family_owners = {0, 1, 2};
            }

            // Qualifiers: the first position stays required (it carries the
            // assurance for internal calls); other never-required positions
            // may be optional.
            std::vector<Nullability> quals(size_t(k), Nullability::Required);
            StmtList body = buildBody(plan, shape, loop_wrap, callee, mutual, plan.name + "_mate");
            if (rich)
                for (int i = 1; i < k; ++i)
                    if (plan.expected[size_t(i)] == NullabilityClass::NotLocallyRequired &&
                        rng.nextUnit() < 0.4)
                        quals[size_t(i)] = Nullability::Optional;

            if (family) {
                std::string tag = std::to_string(project);
                std::vector<std::string> owners = {"Impl" + tag + "Base", "Impl" + tag + "X",
                                                   "Impl" + tag + "Y"};
                MethodDecl first;
                for (size_t oi = 0; oi < owners.size(); ++oi) {
                    MethodDecl decl = planToDecl(plan, body, quals, owners[oi]);
                    if (oi == 0) first = decl;
                    program.methods.push_back(std::move(decl));
                }
                recordTruth(plan, first, int(owners.size()));
                budget -= int(owners.size());
            } else if (mutual) {
                MethodPlan partner = plan;
                partner.name = plan.name + "_mate";
                StmtList partner_body =
                    buildBody(partner, Shape::Recursive, false, nullptr, true, plan.name);
                // re-derive our own body as the mutual half calling partner
                MethodPlan self = plan;
                StmtList self_body =
                    buildBody(self, Shape::Recursive, false, nullptr, true, partner.name);
                MethodDecl self_decl = planToDecl(self, std::move(self_body), quals, std::nullopt);
                MethodDecl partner_decl =
                    planToDecl(partner, std::move(partner_body), quals, std::nullopt);
                recordTruth(self, self_decl, 1);
                recordTruth(partner, partner_decl, 1);
                program.methods.push_back(std::move(self_decl));
                program.methods.push_back(std::move(partner_decl));
                per_project_plans[size_t(project)].push_back(self);
                per_project_plans[size_t(project)].push_back(partner);
                budget -= 2;
                continue;
            } else {
                MethodDecl decl = planToDecl(plan, std::move(body), quals, std::nullopt);
                recordTruth(plan, decl, 1);
                program.methods.push_back(std::move(decl));
                budget -= 1;
            }
            per_project_plans[size_t(project)].push_back(plan);
        }
    }

    void declareFaces() {
        // One face per classifier, listing every method whose first
        // reference parameter is declared with that type. This keeps the
        // corpus clean under both call models.
        std::map<std::string, std::vector<MethodSignature>> by_type;
        std::map<std::string, std::set<AbstractionKey>> seen;
        for (const auto& m : program.methods) {
            if (m.params.empty() || m.params[0].kind != ParamKind::Reference) continue;
            MethodSignature sig;
            sig.name = m.name;
            for (const auto& p : m.params)
                sig.params.push_back(
                    {p.kind == ParamKind::Value ? "" : p.type_name, p.kind});
            if (seen[m.params[0].type_name].insert(sig.key()).second)
                by_type[m.params[0].type_name].push_back(std::move(sig));
        }
        for (const auto& c : program.classifiers) {
            auto it = by_type.find(c.name);
            if (it == by_type.end()) continue;
            FaceDecl f;
            f.name = c.name;
            f.signatures = it->second;
            program.faces.push_back(std::move(f));
        }
    }

    void generateEntries() {
        if (!rich) return;
        for (int p = 0; p < projects; ++p) {
            MethodDecl entry;
            entry.name = "main_proj" + std::to_string(p);
            StmtList body;
            // One fresh object per classifier the project uses, plus
            // receivers for the polymorphic families.
            std::map<std::string, std::string> obj_for_type;
            auto ensureObject = [&](const std::string& type) {
                auto it = obj_for_type.find(type);
                if (it != obj_for_type.end()) return it->second;
                std::string var = "x_" + type;
                body.push_back(stmt(AssignStmt{var, NewExpr{type}}));
                obj_for_type[type] = var;
                return var;
            };
            body.push_back(stmt(AssignStmt{"vv", OpaqueExpr{}}));

            const std::string& d1 = family_derived1[size_t(p)];
            const std::string& d2 = family_derived2[size_t(p)];

            for (const auto& plan : per_project_plans[size_t(p)]) {
                bool is_family = !plan.family_owners.empty();
                int variants = is_family ? 3 : 1;
                for (int variant = 0; variant < variants; ++variant) {
                    CallStmt call;
                    call.method = plan.name;
                    for (size_t i = 0; i < plan.ref_types.size(); ++i) {
                        bool may_null =
                            i > 0 &&
                            plan.expected[i] == NullabilityClass::NotLocallyRequired &&
                            rng.nextUnit() < 0.3;
                        if (may_null) {
                            call.args.push_back({true, ""});
                            continue;
                        }
                        std::string type = plan.ref_types[i];
                        if (i == 0 && is_family)
                            type = variant == 0 ? plan.ref_types[0] : (variant == 1 ? d1 : d2);
                        call.args.push_back({false, ensureObject(type)});
                    }
                    if (plan.has_value_param) call.args.push_back({false, "vv"});
                    if (rng.nextUnit() < 0.3) {
                        IfStmt f;
                        f.cond = OpaqueCond{};
                        f.then_body.push_back(stmt(std::move(call)));
                        body.push_back(stmt(std::move(f)));
                    } else {
                        body.push_back(stmt(std::move(call)));
                    }
                }
            }
            body.push_back(stmt(ReturnStmt{}));
            entry.body = std::move(body);
            truth.entry_points.push_back(entry.name);
            program.methods.push_back(std::move(entry));
        }
    }
};

} // namespace

std::string GroundTruth::classesToCsv() const {
    std::string out = "abstraction,param_index,class\n";
    for (const auto& [key, cls] : expected_class)
        out += csvLine({key.first.str(), std::to_string(key.second),
                        nullabilityClassName(cls)}) +
               "\n";
    return out;
}

std::string GroundTruth::projectsToCsv() const {
    std::string out = "abstraction,project\n";
    for (const auto& [key, project] : project_of)
        out += csvLine({key.str(), project}) + "\n";
    return out;
}

CorpusResult generateCorpus(const CorpusSpec& spec) {
    CorpusResult result;
    auto reject = [&](const std::string& msg) {
        result.diagnostics.push_back({Severity::Error, "infeasible-corpus-spec", {}, "", msg});
    };
    double mix = spec.frac_pd + spec.frac_pp + spec.frac_pn + spec.frac_forward +
                 spec.frac_recursive;
    if (std::abs(mix - 1.0) > 1e-9) reject("shape fractions must sum to 1");
    if (spec.method_count < 1) reject("method_count must be at least 1");
    if (spec.max_ref_params < 1 || spec.max_ref_params > 12)
        reject("max_ref_params must be in 1..12");
    if (spec.loop_density < 0 || spec.loop_density > 1)
        reject("loop_density must be in [0,1]");
    if (spec.project_count < 1) reject("project_count must be at least 1");
    if (!result.diagnostics.empty()) return result;

    Generator gen(spec);
    gen.rich = spec.method_count >= 20;
    gen.projects = gen.rich ? spec.project_count : 1;
    // Uneven project weights, in the spirit of real by-project size spreads.
    for (int p = 0; p < gen.projects; ++p)
        gen.project_weights.push_back(double((p + 1) * (p + 1)));

    gen.declareTypes();
    gen.generateMethods();
    gen.declareFaces();
    gen.generateEntries();
    refreshEntryPoints(gen.program);

    DiagnosticList vdiags = validateProgram(gen.program);
    assert(vdiags.empty() && "generated corpora must validate");
    (void)vdiags;

    result.program = std::move(gen.program);
    result.truth = std::move(gen.truth);
    return result;
}

} // namespace mol
