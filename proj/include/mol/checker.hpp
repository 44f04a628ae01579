#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "mol/ast.hpp"
#include "mol/diagnostics.hpp"
#include "mol/index.hpp"

namespace mol {

// A declaration's two independent parts plus its nullability qualifier. The
// MOL surface syntax names classifier and face with a single type name;
// locals adopt the type of their first assignment and default to Required,
// fields default to Optional.
struct DeclType {
    std::string classifier;
    std::string face;
    Nullability nullability = Nullability::Required;
};

enum class CheckMode { Continuum, Conventional };

// The registry of implementations known to the dispatcher is the validated
// program index itself (implementations maps abstraction -> bodies).
using Registry = ProgramIndex;

// Faces order by signature-set inclusion: sub <= sup iff sup's signatures are
// a subset of sub's.
bool faceSubtype(const std::set<AbstractionKey>& sub, const std::set<AbstractionKey>& sup);

// Everything proven available at a point: the union of the faces of the
// non-nullable references in scope. Grows only through checked assignments
// and null tests; branch gains are dropped at the join.
struct AssurancePool {
    std::set<AbstractionKey> proven;
};

// Pool at method entry: union over Required reference parameters of their
// face's signatures. Optional parameters contribute nothing.
AssurancePool entryPool(const MethodDecl& m, const Registry& registry);

// Call-site verdict. Continuum: the callee must be proven by the pool or by
// the face of some argument that is declared Required or known non-null, and
// the registry must hold at least one implementation. Conventional: the
// first argument is the target; its declared face must contain the callee
// signature and some implementation must be owned by a class whose
// classifier is the target's classifier or an ancestor of it (free-standing
// implementations pass the ownership test, modelling static calls).
std::optional<Diagnostic> checkCall(const AssurancePool& pool, const CallStmt& call,
                                    const SourcePos& pos, CheckMode mode,
                                    const Registry& registry,
                                    const std::map<std::string, DeclType>& local_types,
                                    const std::set<std::string>& known_non_null);

struct AssignmentSource {
    bool nullable = false;                  // may the source be null here?
    std::optional<std::string> classifier;  // nullopt for the bare null literal
    std::set<AbstractionKey> proven;        // signatures proven for the source
};

// Null to an Optional target is fine; null to a Required target is an error;
// a non-null source must be the target classifier or a declared descendant
// and must prove every signature of the target's face.
std::optional<Diagnostic> checkAssignment(const DeclType& target, const AssignmentSource& source,
                                          const Registry& registry, const SourcePos& pos);

// Whole-program check in one mode. Empty iff every statement checks; ties in
// dispatch specificity are reported as warnings.
DiagnosticList checkProgram(const Program& p, const Registry& registry, CheckMode mode);

} // namespace mol
