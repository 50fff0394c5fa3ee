#include "homsynth/parser.hpp"

#include <cctype>
#include <optional>
#include <sstream>

#include "homsynth/errors.hpp"

namespace homsynth {

namespace {

enum class Tok {
    End, Ident, Int, LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Semi, Comma, Assign, Plus, Minus, Star, Slash, Lt, Le, Gt, Ge, EqEq, Ne,
    Not, AndAnd, OrOr, Question, Colon, PlusPlus, Pipe, Tilde  // Tilde: '~>' in rule files
};

struct Token {
    Tok kind;
    std::string text;
    std::int64_t value = 0;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_ws();
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Tok::End;
            tok_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                id += src_[pos_];
                bump();
            }
            tok_.kind = Tok::Ident;
            tok_.text = id;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::int64_t v = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                v = v * 10 + (src_[pos_] - '0');
                bump();
            }
            tok_.kind = Tok::Int;
            tok_.value = v;
            return;
        }
        auto two = [&](char a, char b) {
            return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
        };
        if (two('=', '=')) { bump(); bump(); tok_.kind = Tok::EqEq; return; }
        if (two('!', '=')) { bump(); bump(); tok_.kind = Tok::Ne; return; }
        if (two('<', '=')) { bump(); bump(); tok_.kind = Tok::Le; return; }
        if (two('>', '=')) { bump(); bump(); tok_.kind = Tok::Ge; return; }
        if (two('&', '&')) { bump(); bump(); tok_.kind = Tok::AndAnd; return; }
        if (two('|', '|')) { bump(); bump(); tok_.kind = Tok::OrOr; return; }
        if (two('+', '+')) { bump(); bump(); tok_.kind = Tok::PlusPlus; return; }
        if (two('~', '>')) { bump(); bump(); tok_.kind = Tok::Tilde; return; }
        bump();
        switch (c) {
            case '(': tok_.kind = Tok::LParen; return;
            case ')': tok_.kind = Tok::RParen; return;
            case '{': tok_.kind = Tok::LBrace; return;
            case '}': tok_.kind = Tok::RBrace; return;
            case '[': tok_.kind = Tok::LBracket; return;
            case ']': tok_.kind = Tok::RBracket; return;
            case ';': tok_.kind = Tok::Semi; return;
            case ',': tok_.kind = Tok::Comma; return;
            case '=': tok_.kind = Tok::Assign; return;
            case '+': tok_.kind = Tok::Plus; return;
            case '-': tok_.kind = Tok::Minus; return;
            case '*': tok_.kind = Tok::Star; return;
            case '/': tok_.kind = Tok::Slash; return;
            case '<': tok_.kind = Tok::Lt; return;
            case '>': tok_.kind = Tok::Gt; return;
            case '!': tok_.kind = Tok::Not; return;
            case '?': tok_.kind = Tok::Question; return;
            case ':': tok_.kind = Tok::Colon; return;
            case '|': tok_.kind = Tok::Pipe; return;
            default:
                throw SyntaxError(std::string("unexpected character '") + c + "'", line_, col_);
        }
    }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_;
};

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    Program parse_program() {
        Program p;
        while (lex_.peek().kind != Tok::End) p.statements.push_back(statement());
        return p;
    }

    Expr parse_single_expression() {
        Expr e = expression();
        expect(Tok::End, "end of input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) {
        throw SyntaxError(msg, lex_.peek().line, lex_.peek().col);
    }

    Token expect(Tok k, const std::string& what) {
        if (lex_.peek().kind != k) fail("expected " + what);
        return lex_.next();
    }

    bool accept(Tok k) {
        if (lex_.peek().kind == k) {
            lex_.next();
            return true;
        }
        return false;
    }

    StmtPtr statement() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Ident) {
            if (t.text == "while" || t.text == "do")
                throw UnsupportedConstruct(t.text + "-loop");
            if (t.text == "for") return for_stmt();
            if (t.text == "if") return if_stmt();
            if (t.text == "return" || t.text == "break" || t.text == "continue")
                throw UnsupportedConstruct(t.text + " statement");
            return assign_stmt();
        }
        fail("expected a statement");
    }

    StmtPtr assign_stmt() {
        Token name = expect(Tok::Ident, "identifier");
        auto s = std::make_shared<Stmt>();
        if (accept(Tok::LBracket)) {
            s->kind = StmtKind::SeqAssign;
            s->lhs = name.text;
            s->seq_index = expression();
            expect(Tok::RBracket, "]");
        } else {
            s->kind = StmtKind::Assign;
            s->lhs = name.text;
        }
        expect(Tok::Assign, "=");
        s->rhs = expression();
        expect(Tok::Semi, ";");
        return s;
    }

    std::vector<StmtPtr> block() {
        std::vector<StmtPtr> body;
        if (accept(Tok::LBrace)) {
            while (lex_.peek().kind != Tok::RBrace) body.push_back(statement());
            expect(Tok::RBrace, "}");
        } else {
            body.push_back(statement());
        }
        return body;
    }

    StmtPtr if_stmt() {
        lex_.next();  // if
        auto s = std::make_shared<Stmt>();
        s->kind = StmtKind::If;
        expect(Tok::LParen, "(");
        s->cond = expression();
        expect(Tok::RParen, ")");
        s->then_body = block();
        if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "else") {
            lex_.next();
            s->else_body = block();
        }
        return s;
    }

    // for (i = 0; i < |s|; i++) { ... }
    StmtPtr for_stmt() {
        lex_.next();  // for
        auto s = std::make_shared<Stmt>();
        s->kind = StmtKind::For;
        expect(Tok::LParen, "(");
        Token it = expect(Tok::Ident, "iterator name");
        s->iterator = it.text;
        expect(Tok::Assign, "=");
        Token zero = expect(Tok::Int, "0");
        if (zero.value != 0) fail("iteration must start at 0");
        expect(Tok::Semi, ";");
        Token it2 = expect(Tok::Ident, "iterator name");
        if (it2.text != s->iterator) fail("loop condition must test the iterator");
        expect(Tok::Lt, "<");
        expect(Tok::Pipe, "|");
        Token seq = expect(Tok::Ident, "sequence name");
        s->sequence = seq.text;
        expect(Tok::Pipe, "|");
        expect(Tok::Semi, ";");
        Token it3 = expect(Tok::Ident, "iterator name");
        if (it3.text != s->iterator) fail("loop increment must step the iterator");
        expect(Tok::PlusPlus, "++");
        expect(Tok::RParen, ")");
        s->body = block();
        return s;
    }

    Expr expression() { return ternary(); }

    Expr ternary() {
        Expr c = logical_or();
        if (accept(Tok::Question)) {
            Expr t = expression();
            expect(Tok::Colon, ":");
            Expr f = ternary();
            return cond(c, t, f);
        }
        return c;
    }

    Expr logical_or() {
        Expr e = logical_and();
        while (accept(Tok::OrOr)) e = binary(BinOp::Or, e, logical_and());
        return e;
    }

    Expr logical_and() {
        Expr e = comparison();
        while (accept(Tok::AndAnd)) e = binary(BinOp::And, e, comparison());
        return e;
    }

    Expr comparison() {
        Expr e = additive();
        BinOp op;
        switch (lex_.peek().kind) {
            case Tok::Lt: op = BinOp::Lt; break;
            case Tok::Le: op = BinOp::Le; break;
            case Tok::Gt: op = BinOp::Gt; break;
            case Tok::Ge: op = BinOp::Ge; break;
            case Tok::EqEq: op = BinOp::Eq; break;
            case Tok::Ne: op = BinOp::Ne; break;
            default: return e;
        }
        lex_.next();
        return binary(op, e, additive());
    }

    Expr additive() {
        Expr e = multiplicative();
        for (;;) {
            if (accept(Tok::Plus)) e = binary(BinOp::Add, e, multiplicative());
            else if (accept(Tok::Minus)) e = binary(BinOp::Sub, e, multiplicative());
            else return e;
        }
    }

    Expr multiplicative() {
        Expr e = unary();
        for (;;) {
            if (accept(Tok::Star)) e = binary(BinOp::Mul, e, unary());
            else if (accept(Tok::Slash)) e = binary(BinOp::Div, e, unary());
            else return e;
        }
    }

    Expr unary() {
        if (accept(Tok::Minus)) {
            Expr e = unary();
            if (e->kind == ExprKind::IntConst) return int_const(-e->int_value);
            return neg(e);
        }
        if (accept(Tok::Not)) return lnot(unary());
        return primary();
    }

    Expr primary() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Tok::Int: {
                Token tok = lex_.next();
                return int_const(tok.value);
            }
            case Tok::LParen: {
                lex_.next();
                Expr e = expression();
                expect(Tok::RParen, ")");
                return e;
            }
            case Tok::Pipe: {
                lex_.next();
                Token seq = expect(Tok::Ident, "sequence name");
                expect(Tok::Pipe, "|");
                return seq_length(seq.text);
            }
            case Tok::Ident: {
                Token id = lex_.next();
                if (id.text == "true") return bool_const(true);
                if (id.text == "false") return bool_const(false);
                if (id.text == "MAX_INT") return max_int();
                if (id.text == "MIN_INT") return min_int();
                if (id.text == "min" || id.text == "max") {
                    if (lex_.peek().kind == Tok::LParen) {
                        lex_.next();
                        Expr a = expression();
                        expect(Tok::Comma, ",");
                        Expr b = expression();
                        expect(Tok::RParen, ")");
                        return binary(id.text == "min" ? BinOp::Min : BinOp::Max, a, b);
                    }
                }
                if (lex_.peek().kind == Tok::LBracket) {
                    lex_.next();
                    Expr idx = expression();
                    expect(Tok::RBracket, "]");
                    return seq_access(id.text, idx);
                }
                return var(id.text);
            }
            default:
                fail("expected an expression");
        }
    }

    Lexer lex_;
};

void check_declared_before_use(const Program& p);

} // namespace

Program parse_program(const std::string& source) {
    Parser parser(source);
    Program p = parser.parse_program();
    check_declared_before_use(p);
    return p;
}

Expr parse_expression(const std::string& source) {
    Parser parser(source);
    return parser.parse_single_expression();
}

namespace {

void collect_reads(const Expr& e, std::vector<std::string>& vars, std::vector<std::string>& seqs) {
    if (!e) return;
    if (e->kind == ExprKind::Var) vars.push_back(e->name);
    if (e->kind == ExprKind::SeqAccess || e->kind == ExprKind::SeqLength) seqs.push_back(e->name);
    for (const auto& c : e->children) collect_reads(c, vars, seqs);
}

void check_stmts(const std::vector<StmtPtr>& stmts, std::set<std::string>& declared) {
    for (const auto& s : stmts) {
        std::vector<std::string> vars, seqs;
        switch (s->kind) {
            case StmtKind::Assign:
                collect_reads(s->rhs, vars, seqs);
                for (const auto& v : vars)
                    if (!declared.count(v))
                        throw Error("variable used before assignment: " + v);
                declared.insert(s->lhs);
                break;
            case StmtKind::SeqAssign:
                collect_reads(s->rhs, vars, seqs);
                collect_reads(s->seq_index, vars, seqs);
                for (const auto& v : vars)
                    if (!declared.count(v))
                        throw Error("variable used before assignment: " + v);
                break;
            case StmtKind::If: {
                collect_reads(s->cond, vars, seqs);
                for (const auto& v : vars)
                    if (!declared.count(v))
                        throw Error("variable used before assignment: " + v);
                // branches may declare; a variable counts as declared after the
                // if only when some path assigned it — we accept either branch,
                // matching the corpus style of straight-line inits.
                auto then_decl = declared;
                check_stmts(s->then_body, then_decl);
                auto else_decl = declared;
                check_stmts(s->else_body, else_decl);
                for (const auto& v : then_decl) declared.insert(v);
                for (const auto& v : else_decl) declared.insert(v);
                break;
            }
            case StmtKind::For: {
                declared.insert(s->iterator);
                declared.insert(s->sequence);  // sequence is a parameter
                check_stmts(s->body, declared);
                break;
            }
        }
    }
}

void check_declared_before_use(const Program& p) {
    std::set<std::string> declared;
    check_stmts(p.statements, declared);
}

void print_stmt(const Stmt& s, std::ostringstream& os, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    switch (s.kind) {
        case StmtKind::Assign:
            os << pad << s.lhs << " = " << to_string(s.rhs) << ";\n";
            break;
        case StmtKind::SeqAssign:
            os << pad << s.lhs << "[" << to_string(s.seq_index) << "] = "
               << to_string(s.rhs) << ";\n";
            break;
        case StmtKind::If:
            os << pad << "if (" << to_string(s.cond) << ") {\n";
            for (const auto& c : s.then_body) print_stmt(*c, os, indent + 1);
            os << pad << "}";
            if (!s.else_body.empty()) {
                os << " else {\n";
                for (const auto& c : s.else_body) print_stmt(*c, os, indent + 1);
                os << pad << "}";
            }
            os << "\n";
            break;
        case StmtKind::For:
            os << pad << "for (" << s.iterator << " = 0; " << s.iterator << " < |"
               << s.sequence << "|; " << s.iterator << "++) {\n";
            for (const auto& c : s.body) print_stmt(*c, os, indent + 1);
            os << pad << "}\n";
            break;
    }
}

bool stmt_equal(const Stmt& a, const Stmt& b) {
    if (a.kind != b.kind) return false;
    auto vec_equal = [](const std::vector<StmtPtr>& x, const std::vector<StmtPtr>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!stmt_equal(*x[i], *y[i])) return false;
        return true;
    };
    switch (a.kind) {
        case StmtKind::Assign:
            return a.lhs == b.lhs && struct_equal(a.rhs, b.rhs);
        case StmtKind::SeqAssign:
            return a.lhs == b.lhs && struct_equal(a.rhs, b.rhs) &&
                   struct_equal(a.seq_index, b.seq_index);
        case StmtKind::If:
            return struct_equal(a.cond, b.cond) && vec_equal(a.then_body, b.then_body) &&
                   vec_equal(a.else_body, b.else_body);
        case StmtKind::For:
            return a.iterator == b.iterator && a.sequence == b.sequence &&
                   vec_equal(a.body, b.body);
    }
    return false;
}

} // namespace

std::string to_string(const Program& p) {
    std::ostringstream os;
    for (const auto& s : p.statements) print_stmt(*s, os, 0);
    return os.str();
}

std::string to_string(const Stmt& s, int indent) {
    std::ostringstream os;
    print_stmt(s, os, indent);
    return os.str();
}

bool program_equal(const Program& a, const Program& b) {
    if (a.statements.size() != b.statements.size()) return false;
    for (std::size_t i = 0; i < a.statements.size(); ++i)
        if (!stmt_equal(*a.statements[i], *b.statements[i])) return false;
    return true;
}

} // namespace homsynth
