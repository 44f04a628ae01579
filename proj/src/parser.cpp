#include "mol/parser.hpp"

#include <cctype>
#include <map>

#include "mol/validator.hpp"

namespace mol {
namespace {

enum class Tok {
    Identifier,
    KwClassifier,
    KwExtends,
    KwFace,
    KwClass,
    KwIs,
    KwMethod,
    KwReq,
    KwOpt,
    KwVal,
    KwDeref,
    KwCall,
    KwReturn,
    KwFail,
    KwIf,
    KwElse,
    KwWhile,
    KwNull,
    KwNew,
    KwOpaque,
    Semi,
    Comma,
    Colon,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Assign,
    EqNull, // ==
    NeNull, // !=
    End,
    Bad,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourcePos pos;
};

const std::map<std::string, Tok>& keywordTable() {
    static const std::map<std::string, Tok> table = {
        {"classifier", Tok::KwClassifier},
        {"extends", Tok::KwExtends},
        {"face", Tok::KwFace},
        {"class", Tok::KwClass},
        {"is", Tok::KwIs},
        {"method", Tok::KwMethod},
        {"req", Tok::KwReq},
        {"opt", Tok::KwOpt},
        {"val", Tok::KwVal},
        {"deref", Tok::KwDeref},
        {"call", Tok::KwCall},
        {"return", Tok::KwReturn},
        {"fail", Tok::KwFail},
        {"if", Tok::KwIf},
        {"else", Tok::KwElse},
        {"while", Tok::KwWhile},
        {"null", Tok::KwNull},
        {"new", Tok::KwNew},
        {"opaque", Tok::KwOpaque},
    };
    return table;
}

const char* tokenName(Tok t) {
    switch (t) {
        case Tok::Identifier: return "identifier";
        case Tok::KwClassifier: return "'classifier'";
        case Tok::KwExtends: return "'extends'";
        case Tok::KwFace: return "'face'";
        case Tok::KwClass: return "'class'";
        case Tok::KwIs: return "'is'";
        case Tok::KwMethod: return "'method'";
        case Tok::KwReq: return "'req'";
        case Tok::KwOpt: return "'opt'";
        case Tok::KwVal: return "'val'";
        case Tok::KwDeref: return "'deref'";
        case Tok::KwCall: return "'call'";
        case Tok::KwReturn: return "'return'";
        case Tok::KwFail: return "'fail'";
        case Tok::KwIf: return "'if'";
        case Tok::KwElse: return "'else'";
        case Tok::KwWhile: return "'while'";
        case Tok::KwNull: return "'null'";
        case Tok::KwNew: return "'new'";
        case Tok::KwOpaque: return "'opaque'";
        case Tok::Semi: return "';'";
        case Tok::Comma: return "','";
        case Tok::Colon: return "':'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Assign: return "'='";
        case Tok::EqNull: return "'=='";
        case Tok::NeNull: return "'!='";
        case Tok::End: return "end of input";
        case Tok::Bad: return "invalid character";
    }
    return "?";
}

class Lexer {
public:
    Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

    std::vector<Token> run(DiagnosticList& diags) {
        std::vector<Token> out;
        while (true) {
            skipSpaceAndComments();
            Token t;
            t.pos = here();
            if (i_ >= text_.size()) {
                t.kind = Tok::End;
                out.push_back(t);
                break;
            }
            char c = text_[i_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                size_t start = i_;
                while (i_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_'))
                    advance();
                t.text = std::string(text_.substr(start, i_ - start));
                auto it = keywordTable().find(t.text);
                t.kind = it == keywordTable().end() ? Tok::Identifier : it->second;
                out.push_back(t);
                continue;
            }
            switch (c) {
                case ';': t.kind = Tok::Semi; advance(); break;
                case ',': t.kind = Tok::Comma; advance(); break;
                case ':': t.kind = Tok::Colon; advance(); break;
                case '(': t.kind = Tok::LParen; advance(); break;
                case ')': t.kind = Tok::RParen; advance(); break;
                case '{': t.kind = Tok::LBrace; advance(); break;
                case '}': t.kind = Tok::RBrace; advance(); break;
                case '=':
                    advance();
                    if (i_ < text_.size() && text_[i_] == '=') {
                        t.kind = Tok::EqNull;
                        advance();
                    } else {
                        t.kind = Tok::Assign;
                    }
                    break;
                case '!':
                    advance();
                    if (i_ < text_.size() && text_[i_] == '=') {
                        t.kind = Tok::NeNull;
                        advance();
                    } else {
                        t.kind = Tok::Bad;
                        t.text = "!";
                        diags.push_back({Severity::Error, "syntax-error", t.pos, "",
                                         "stray '!' (expected '!=')"});
                    }
                    break;
                default:
                    t.kind = Tok::Bad;
                    t.text = std::string(1, c);
                    diags.push_back({Severity::Error, "syntax-error", t.pos, "",
                                     std::string("invalid character '") + c + "'"});
                    advance();
                    break;
            }
            if (t.kind != Tok::Bad) out.push_back(t);
            if (hasErrors(diags)) break;
        }
        return out;
    }

private:
    SourcePos here() const { return {file_, line_, col_}; }

    void advance() {
        if (i_ < text_.size()) {
            if (text_[i_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++i_;
        }
    }

    void skipSpaceAndComments() {
        while (i_ < text_.size()) {
            char c = text_[i_];
            if (c == '/' && i_ + 1 < text_.size() && text_[i_ + 1] == '/') {
                while (i_ < text_.size() && text_[i_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::string file_;
    size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, DiagnosticList& diags)
        : toks_(std::move(tokens)), diags_(diags) {}

    Program run() {
        Program p;
        while (!failed_ && peek().kind != Tok::End) {
            switch (peek().kind) {
                case Tok::KwClassifier: parseClassifier(p); break;
                case Tok::KwFace: parseFace(p); break;
                case Tok::KwClass: parseClass(p); break;
                case Tok::KwMethod: parseMethod(p, std::nullopt); break;
                default:
                    fail(peek(), "expected 'classifier', 'face', 'class' or 'method'");
                    break;
            }
        }
        refreshEntryPoints(p);
        return p;
    }

private:
    const Token& peek(size_t ahead = 0) const {
        size_t i = pos_ + ahead;
        if (i >= toks_.size()) i = toks_.size() - 1; // End sentinel
        return toks_[i];
    }

    Token take() {
        Token t = peek();
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }

    void fail(const Token& at, const std::string& what) {
        if (failed_) return;
        failed_ = true;
        diags_.push_back({Severity::Error, "syntax-error", at.pos, "",
                          what + ", found " + tokenName(at.kind)});
    }

    Token expect(Tok kind, const char* context) {
        if (peek().kind != kind) {
            fail(peek(), std::string("expected ") + tokenName(kind) + " " + context);
            return Token{kind, "", peek().pos};
        }
        return take();
    }

    std::string expectName(const char* context) {
        if (peek().kind != Tok::Identifier) {
            fail(peek(), std::string("expected identifier ") + context);
            return "_error_";
        }
        return take().text;
    }

    void parseClassifier(Program& p) {
        ClassifierDecl d;
        d.pos = peek().pos;
        take(); // classifier
        d.name = expectName("after 'classifier'");
        if (peek().kind == Tok::KwExtends) {
            take();
            d.parents.push_back(expectName("after 'extends'"));
            while (!failed_ && peek().kind == Tok::Comma) {
                take();
                d.parents.push_back(expectName("in parent list"));
            }
        }
        expect(Tok::Semi, "after classifier declaration");
        if (!failed_) p.classifiers.push_back(std::move(d));
    }

    SigParam parseSigParam() {
        SigParam sp;
        if (peek().kind == Tok::KwVal) {
            take();
            expectName("after 'val'");
            sp.kind = ParamKind::Value;
            return sp;
        }
        if (peek().kind == Tok::KwReq || peek().kind == Tok::KwOpt) {
            take();
        } else {
            fail(peek(), "expected 'req', 'opt' or 'val' in signature parameter");
            return sp;
        }
        expectName("as parameter name");
        expect(Tok::Colon, "after parameter name");
        sp.type_name = expectName("as parameter type");
        sp.kind = ParamKind::Reference;
        return sp;
    }

    void parseFace(Program& p) {
        FaceDecl d;
        d.pos = peek().pos;
        take(); // face
        d.name = expectName("after 'face'");
        expect(Tok::LBrace, "after face name");
        while (!failed_ && peek().kind == Tok::Identifier) {
            MethodSignature sig;
            sig.name = take().text;
            expect(Tok::LParen, "after signature name");
            if (peek().kind != Tok::RParen) {
                sig.params.push_back(parseSigParam());
                while (!failed_ && peek().kind == Tok::Comma) {
                    take();
                    sig.params.push_back(parseSigParam());
                }
            }
            expect(Tok::RParen, "after signature parameters");
            expect(Tok::Semi, "after signature");
            if (!failed_) d.signatures.push_back(std::move(sig));
        }
        expect(Tok::RBrace, "to close face");
        if (!failed_) p.faces.push_back(std::move(d));
    }

    Param parseParamDecl() {
        Param param;
        if (peek().kind == Tok::KwVal) {
            take();
            param.name = expectName("after 'val'");
            param.kind = ParamKind::Value;
            return param;
        }
        if (peek().kind == Tok::KwReq) {
            take();
            param.nullability = Nullability::Required;
        } else if (peek().kind == Tok::KwOpt) {
            take();
            param.nullability = Nullability::Optional;
        } else {
            fail(peek(), "expected 'req', 'opt' or 'val' in parameter declaration");
            return param;
        }
        param.name = expectName("as parameter name");
        expect(Tok::Colon, "after parameter name");
        param.type_name = expectName("as parameter type");
        param.kind = ParamKind::Reference;
        return param;
    }

    void parseClass(Program& p) {
        ClassDecl d;
        d.pos = peek().pos;
        take(); // class
        d.name = expectName("after 'class'");
        expect(Tok::KwIs, "after class name");
        d.classifier = expectName("after 'is'");
        expect(Tok::LBrace, "after class header");
        // Fields first, then methods; the grammar fixes the order.
        while (!failed_ && (peek().kind == Tok::KwReq || peek().kind == Tok::KwOpt ||
                            peek().kind == Tok::Identifier)) {
            FieldDecl f;
            f.pos = peek().pos;
            if (peek().kind == Tok::KwReq) {
                take();
                f.nullability = Nullability::Required;
            } else if (peek().kind == Tok::KwOpt) {
                take();
                f.nullability = Nullability::Optional;
            } else {
                f.nullability = Nullability::Optional; // default for fields
            }
            f.name = expectName("as field name");
            expect(Tok::Colon, "after field name");
            f.type_name = expectName("as field type");
            expect(Tok::Semi, "after field declaration");
            if (!failed_) d.fields.push_back(std::move(f));
        }
        if (!failed_) p.classes.push_back(d);
        while (!failed_ && peek().kind == Tok::KwMethod) parseMethod(p, d.name);
        expect(Tok::RBrace, "to close class");
    }

    void parseMethod(Program& p, std::optional<std::string> owner) {
        MethodDecl m;
        m.pos = peek().pos;
        m.owner = std::move(owner);
        take(); // method
        m.name = expectName("after 'method'");
        expect(Tok::LParen, "after method name");
        if (peek().kind != Tok::RParen) {
            m.params.push_back(parseParamDecl());
            while (!failed_ && peek().kind == Tok::Comma) {
                take();
                m.params.push_back(parseParamDecl());
            }
        }
        expect(Tok::RParen, "after method parameters");
        expect(Tok::LBrace, "to open method body");
        m.body = parseStmtList();
        expect(Tok::RBrace, "to close method body");
        if (!failed_) p.methods.push_back(std::move(m));
    }

    StmtList parseStmtList() {
        StmtList out;
        while (!failed_ && peek().kind != Tok::RBrace && peek().kind != Tok::End) {
            out.push_back(parseStmt());
        }
        return out;
    }

    Cond parseCond() {
        if (peek().kind == Tok::KwOpaque) {
            take();
            return OpaqueCond{};
        }
        std::string var = expectName("in condition");
        if (peek().kind == Tok::EqNull) {
            take();
            expect(Tok::KwNull, "after '=='");
            return IsNullCond{var};
        }
        if (peek().kind == Tok::NeNull) {
            take();
            expect(Tok::KwNull, "after '!='");
            return NotNullCond{var};
        }
        fail(peek(), "expected '== null' or '!= null' in condition");
        return OpaqueCond{};
    }

    Stmt parseStmt() {
        Stmt s;
        s.pos = peek().pos;
        switch (peek().kind) {
            case Tok::KwDeref: {
                take();
                DerefStmt d{expectName("after 'deref'")};
                expect(Tok::Semi, "after deref");
                s.node = d;
                return s;
            }
            case Tok::KwCall: {
                take();
                CallStmt c;
                c.method = expectName("after 'call'");
                expect(Tok::LParen, "after callee name");
                if (peek().kind != Tok::RParen) {
                    c.args.push_back(parseArg());
                    while (!failed_ && peek().kind == Tok::Comma) {
                        take();
                        c.args.push_back(parseArg());
                    }
                }
                expect(Tok::RParen, "after call arguments");
                expect(Tok::Semi, "after call");
                s.node = std::move(c);
                return s;
            }
            case Tok::KwReturn:
                take();
                expect(Tok::Semi, "after 'return'");
                s.node = ReturnStmt{};
                return s;
            case Tok::KwFail:
                take();
                expect(Tok::Semi, "after 'fail'");
                s.node = FailStmt{};
                return s;
            case Tok::KwIf: {
                take();
                IfStmt f;
                f.cond = parseCond();
                expect(Tok::LBrace, "to open then branch");
                f.then_body = parseStmtList();
                expect(Tok::RBrace, "to close then branch");
                if (peek().kind == Tok::KwElse) {
                    take();
                    expect(Tok::LBrace, "to open else branch");
                    f.else_body = parseStmtList();
                    expect(Tok::RBrace, "to close else branch");
                }
                s.node = std::move(f);
                return s;
            }
            case Tok::KwWhile: {
                take();
                WhileStmt w;
                w.cond = parseCond();
                expect(Tok::LBrace, "to open loop body");
                w.body = parseStmtList();
                expect(Tok::RBrace, "to close loop body");
                s.node = std::move(w);
                return s;
            }
            case Tok::Identifier: {
                AssignStmt a;
                a.var = take().text;
                expect(Tok::Assign, "in assignment");
                a.value = parseExpr();
                expect(Tok::Semi, "after assignment");
                s.node = std::move(a);
                return s;
            }
            default:
                fail(peek(), "expected a statement");
                s.node = ReturnStmt{};
                return s;
        }
    }

    CallArg parseArg() {
        if (peek().kind == Tok::KwNull) {
            take();
            return CallArg{true, ""};
        }
        return CallArg{false, expectName("as call argument")};
    }

    Expr parseExpr() {
        switch (peek().kind) {
            case Tok::KwNull: take(); return NullLit{};
            case Tok::KwOpaque: take(); return OpaqueExpr{};
            case Tok::KwNew: {
                take();
                return NewExpr{expectName("after 'new'")};
            }
            case Tok::Identifier: return VarExpr{take().text};
            default:
                fail(peek(), "expected 'null', 'new', 'opaque' or a variable");
                return NullLit{};
        }
    }

    std::vector<Token> toks_;
    DiagnosticList& diags_;
    size_t pos_ = 0;
    bool failed_ = false;
};

} // namespace

ParseResult parseSyntax(std::string_view text, std::string file_name) {
    ParseResult result;
    Lexer lexer(text, file_name);
    auto tokens = lexer.run(result.diagnostics);
    if (hasErrors(result.diagnostics)) return result;
    Parser parser(std::move(tokens), result.diagnostics);
    Program p = parser.run();
    if (!hasErrors(result.diagnostics)) result.program = std::move(p);
    return result;
}

ParseResult parseProgram(std::string_view text, std::string file_name) {
    return parseFiles({{std::move(file_name), std::string(text)}});
}

ParseResult parseFiles(const std::vector<std::pair<std::string, std::string>>& named_sources) {
    ParseResult result;
    Program merged;
    for (const auto& [name, text] : named_sources) {
        ParseResult one = parseSyntax(text, name);
        if (!one.ok()) {
            result.diagnostics.insert(result.diagnostics.end(), one.diagnostics.begin(),
                                      one.diagnostics.end());
            return result;
        }
        auto& p = *one.program;
        std::move(p.classifiers.begin(), p.classifiers.end(),
                  std::back_inserter(merged.classifiers));
        std::move(p.faces.begin(), p.faces.end(), std::back_inserter(merged.faces));
        std::move(p.classes.begin(), p.classes.end(), std::back_inserter(merged.classes));
        std::move(p.methods.begin(), p.methods.end(), std::back_inserter(merged.methods));
    }
    refreshEntryPoints(merged);
    DiagnosticList vdiags = validateProgram(merged);
    result.diagnostics.insert(result.diagnostics.end(), vdiags.begin(), vdiags.end());
    if (!hasErrors(result.diagnostics)) result.program = std::move(merged);
    return result;
}

} // namespace mol
