#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mol/ast.hpp"

namespace mol {

// Resolved view over a validated Program. Also serves as the checker's
// registry: `implementations` maps each abstraction to every known body.
// All containers are ordered so iteration is deterministic.
struct ProgramIndex {
    const Program* program = nullptr;

    std::map<std::string, const ClassifierDecl*> classifiers;
    std::map<std::string, const FaceDecl*> faces;
    std::map<std::string, const ClassDecl*> classes;

    std::map<AbstractionKey, std::vector<const MethodDecl*>> implementations;
    std::map<std::pair<std::string, int>, AbstractionKey> call_targets;

    // classifier -> every ancestor including itself
    std::map<std::string, std::set<std::string>> ancestry;

    bool isAncestorOrEqual(const std::string& ancestor, const std::string& descendant) const;

    // Shortest ancestry distance descendant -> ancestor, or -1 if unrelated.
    int ancestryDistance(const std::string& ancestor, const std::string& descendant) const;

    // Resolves a call site by name and arity; nullptr when absent (validated
    // programs always resolve).
    const AbstractionKey* resolveCall(const std::string& name, int arity) const;

    // The face bound to a type name: the declared face's signatures, or the
    // empty face when no face of that name exists (a single MOL type name is
    // both the classifier and the face; see README).
    std::set<AbstractionKey> faceSignatures(const std::string& type_name) const;

    const MethodDecl* findMethod(const std::string& qualified_or_plain_name) const;
};

// Requires validateProgram(p) to be empty; the index keeps pointers into p.
ProgramIndex buildIndex(const Program& p);

} // namespace mol
