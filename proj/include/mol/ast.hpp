#pragma once

#include <compare>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mol/diagnostics.hpp"

namespace mol {

enum class ParamKind { Reference, Value };
enum class Nullability { Required, Optional };

// Identity shared by every implementation of one method: name, arity and the
// declared parameter type row. Value positions appear as "val" (a keyword, so
// it can never collide with a classifier name). Nullability qualifiers and
// the owning class are deliberately not part of the key.
struct AbstractionKey {
    std::string name;
    std::vector<std::string> type_row;

    int arity() const { return int(type_row.size()); }
    std::vector<int> refPositions() const;
    int refParamCount() const;
    std::string str() const; // name(T1,T2,val)

    auto operator<=>(const AbstractionKey&) const = default;
};

struct SigParam {
    std::string type_name; // empty for value params
    ParamKind kind = ParamKind::Reference;

    auto operator<=>(const SigParam&) const = default;
};

struct MethodSignature {
    std::string name;
    std::vector<SigParam> params;

    AbstractionKey key() const;
    auto operator<=>(const MethodSignature&) const = default;
};

struct Param {
    std::string name;
    ParamKind kind = ParamKind::Reference;
    Nullability nullability = Nullability::Required;
    std::string type_name; // empty for value params

    bool operator==(const Param&) const = default;
};

// ---- statements ----

struct NullLit {
    bool operator==(const NullLit&) const = default;
};
struct NewExpr {
    std::string classifier;
    bool operator==(const NewExpr&) const = default;
};
struct VarExpr {
    std::string name;
    bool operator==(const VarExpr&) const = default;
};
struct OpaqueExpr {
    bool operator==(const OpaqueExpr&) const = default;
};
using Expr = std::variant<NullLit, NewExpr, VarExpr, OpaqueExpr>;

struct IsNullCond {
    std::string var;
    bool operator==(const IsNullCond&) const = default;
};
struct NotNullCond {
    std::string var;
    bool operator==(const NotNullCond&) const = default;
};
struct OpaqueCond {
    bool operator==(const OpaqueCond&) const = default;
};
using Cond = std::variant<IsNullCond, NotNullCond, OpaqueCond>;

struct Stmt;
using StmtList = std::vector<Stmt>;

struct DerefStmt {
    std::string var;
    bool operator==(const DerefStmt&) const = default;
};
struct CallArg {
    bool is_null = false;
    std::string var; // empty when is_null
    bool operator==(const CallArg&) const = default;
};
struct CallStmt {
    std::string method;
    std::vector<CallArg> args;
    bool operator==(const CallStmt&) const = default;
};
struct AssignStmt {
    std::string var;
    Expr value;
    bool operator==(const AssignStmt&) const = default;
};
struct IfStmt {
    Cond cond;
    StmtList then_body;
    StmtList else_body;
    bool operator==(const IfStmt&) const;
};
struct WhileStmt {
    Cond cond;
    StmtList body;
    bool operator==(const WhileStmt&) const;
};
struct ReturnStmt {
    bool operator==(const ReturnStmt&) const = default;
};
struct FailStmt {
    bool operator==(const FailStmt&) const = default;
};

using StmtNode =
    std::variant<DerefStmt, CallStmt, AssignStmt, IfStmt, WhileStmt, ReturnStmt, FailStmt>;

struct Stmt {
    SourcePos pos;
    StmtNode node;

    // Structural equality ignores source positions.
    bool operator==(const Stmt& other) const { return node == other.node; }
};

// ---- declarations ----

struct ClassifierDecl {
    std::string name;
    std::vector<std::string> parents;
    SourcePos pos;

    bool operator==(const ClassifierDecl& o) const {
        return name == o.name && parents == o.parents;
    }
};

struct FaceDecl {
    std::string name;
    std::vector<MethodSignature> signatures;
    SourcePos pos;

    bool operator==(const FaceDecl& o) const {
        return name == o.name && signatures == o.signatures;
    }
};

struct FieldDecl {
    std::string name;
    std::string type_name;
    Nullability nullability = Nullability::Optional;
    SourcePos pos;

    bool operator==(const FieldDecl& o) const {
        return name == o.name && type_name == o.type_name && nullability == o.nullability;
    }
};

struct ClassDecl {
    std::string name;
    std::string classifier;
    std::vector<FieldDecl> fields;
    SourcePos pos;

    bool operator==(const ClassDecl& o) const {
        return name == o.name && classifier == o.classifier && fields == o.fields;
    }
};

struct MethodDecl {
    std::optional<std::string> owner; // owning class; nullopt = free-standing
    std::string name;
    std::vector<Param> params;
    StmtList body;
    SourcePos pos;

    AbstractionKey key() const;
    std::string qualifiedName() const; // "Owner::name" or "name"

    bool operator==(const MethodDecl& o) const {
        return owner == o.owner && name == o.name && params == o.params && body == o.body;
    }
};

// Declaration order is preserved; the validator enforces set semantics
// (unique names, unique abstraction keys per scope). entry_points is derived:
// the zero-parameter free-standing methods in declaration order.
struct Program {
    std::vector<ClassifierDecl> classifiers;
    std::vector<FaceDecl> faces;
    std::vector<ClassDecl> classes;
    std::vector<MethodDecl> methods; // includes class-owned methods
    std::vector<std::string> entry_points;

    bool operator==(const Program& o) const {
        return classifiers == o.classifiers && faces == o.faces && classes == o.classes &&
               methods == o.methods && entry_points == o.entry_points;
    }
};

// Recomputes entry_points from the method list.
void refreshEntryPoints(Program& p);

std::string nullabilityKeyword(Nullability n);

} // namespace mol
