#include "zeta1d/parser.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <vector>

namespace zeta1d {

namespace {

enum class Tok { Ident, Int, LParen, RParen, Semi, Comma, At, Hash, Equals, End };

struct Token {
    Tok kind;
    std::string text;
    long value = 0;
    SourceSpan span;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            bump();
        Token t;
        t.span.start = pos_;
        t.span.line = line_;
        t.span.column = col_;
        if (pos_ >= text_.size()) {
            t.kind = Tok::End;
            t.span.end = pos_;
            current_ = t;
            return;
        }
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   std::isalnum(static_cast<unsigned char>(text_[pos_])))
                bump();
            t.kind = Tok::Ident;
            t.text = text_.substr(start, pos_ - start);
        } else if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            bump();
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_])))
                bump();
            t.kind = Tok::Int;
            t.text = text_.substr(start, pos_ - start);
            auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
            t.span.end = pos_;
            if (ec != std::errc() || p != t.text.data() + t.text.size())
                throw Error(ErrCode::SyntaxError, "bad integer literal '" + t.text + "'", t.span);
        } else {
            switch (c) {
            case '(': t.kind = Tok::LParen; break;
            case ')': t.kind = Tok::RParen; break;
            case ';': t.kind = Tok::Semi; break;
            case ',': t.kind = Tok::Comma; break;
            case '@': t.kind = Tok::At; break;
            case '#': t.kind = Tok::Hash; break;
            case '=': t.kind = Tok::Equals; break;
            default: {
                SourceSpan sp{pos_, pos_ + 1, line_, col_};
                throw Error(ErrCode::SyntaxError,
                            std::string("unexpected character '") + c + "'", sp);
            }
            }
            t.text = std::string(1, c);
            bump();
        }
        t.span.end = pos_;
        current_ = t;
    }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    long line_ = 1;
    long col_ = 1;
    Token current_;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    SchemeExpr parse_all() {
        SchemeExpr e = parse_scheme();
        expect(Tok::End, "end of input");
        return e;
    }

private:
    Lexer lex_;

    [[noreturn]] void fail(const std::string& what, const Token& t) {
        throw Error(ErrCode::SyntaxError,
                    "expected " + what + ", found '" + (t.kind == Tok::End ? "<end>" : t.text) +
                        "'",
                    t.span);
    }

    Token expect(Tok kind, const std::string& what) {
        Token t = lex_.take();
        if (t.kind != kind) fail(what, t);
        return t;
    }

    long expect_int(const std::string& what) { return expect(Tok::Int, what).value; }

    Token expect_ident(const std::string& what) { return expect(Tok::Ident, what); }

    std::vector<long> int_list() {
        std::vector<long> values;
        values.push_back(expect_int("integer"));
        while (lex_.peek().kind == Tok::Comma) {
            lex_.take();
            values.push_back(expect_int("integer"));
        }
        return values;
    }

    FieldSpec parse_field() {
        Token name = expect_ident("field (Q, Quad, Cyclo, CycloPlus, Abelian)");
        if (name.text == "Q") return FieldSpec::rationals();
        if (name.text == "Quad") {
            expect(Tok::LParen, "'('");
            long d = expect_int("discriminant");
            expect(Tok::RParen, "')'");
            return FieldSpec::quadratic(d);
        }
        if (name.text == "Cyclo" || name.text == "CycloPlus") {
            bool plus = name.text == "CycloPlus";
            expect(Tok::LParen, "'('");
            long m = expect_int("modulus");
            expect(Tok::RParen, "')'");
            return plus ? FieldSpec::cyclotomic_real(m) : FieldSpec::cyclotomic(m);
        }
        if (name.text == "Abelian") {
            expect(Tok::LParen, "'('");
            long m = expect_int("modulus");
            expect(Tok::Semi, "';'");
            std::vector<long> gens = int_list();
            expect(Tok::RParen, "')'");
            return FieldSpec::abelian(m, std::move(gens));
        }
        fail("field name", name);
    }

    PointSel parse_point() {
        Token name = expect_ident("point selector (p= or deg=)");
        if (name.text == "p") {
            expect(Tok::Equals, "'='");
            long p = expect_int("prime");
            long index = 0;
            if (lex_.peek().kind == Tok::Hash) {
                lex_.take();
                index = expect_int("point index");
            }
            return PointSel::fiber_over(p, index);
        }
        if (name.text == "deg") {
            expect(Tok::Equals, "'='");
            return PointSel::curve_point(expect_int("degree"));
        }
        fail("point selector", name);
    }

    SchemeExpr parse_scheme() {
        Token name = expect_ident("scheme");
        if (name.text == "SpecZ") return SchemeExpr::number_ring(FieldSpec::rationals());
        if (name.text == "SpecOF") {
            expect(Tok::LParen, "'('");
            FieldSpec f = parse_field();
            expect(Tok::RParen, "')'");
            return SchemeExpr::number_ring(std::move(f));
        }
        if (name.text == "SpecF") {
            expect(Tok::LParen, "'('");
            long q = expect_int("prime power");
            expect(Tok::RParen, "')'");
            return SchemeExpr::spec_fq(q);
        }
        if (name.text == "A1") {
            expect(Tok::LParen, "'('");
            long q = expect_int("prime power");
            expect(Tok::RParen, "')'");
            return SchemeExpr::affine_line(q);
        }
        if (name.text == "Curve") {
            expect(Tok::LParen, "'('");
            long q = expect_int("prime power");
            expect(Tok::Semi, "';'");
            std::vector<long> coeffs = int_list();
            expect(Tok::RParen, "')'");
            std::vector<mpz_class> numerator(coeffs.begin(), coeffs.end());
            return SchemeExpr::curve(q, std::move(numerator));
        }
        if (name.text == "remove") {
            expect(Tok::LParen, "'('");
            SchemeExpr base = parse_scheme();
            Token semi = expect(Tok::Semi, "';'");
            (void)semi;
            SchemeExpr merged = apply_removal(std::move(base), name.span);
            expect(Tok::RParen, "')'");
            return merged;
        }
        if (name.text == "union") {
            expect(Tok::LParen, "'('");
            std::vector<SchemeExpr> parts;
            parts.push_back(parse_scheme());
            while (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                parts.push_back(parse_scheme());
            }
            expect(Tok::RParen, "')'");
            return SchemeExpr::disjoint(std::move(parts));
        }
        if (name.text == "glue") {
            expect(Tok::LParen, "'('");
            SchemeExpr left = parse_scheme();
            expect(Tok::At, "'@'");
            PointSel lsel = parse_point();
            expect(Tok::Comma, "','");
            SchemeExpr right = parse_scheme();
            expect(Tok::At, "'@'");
            PointSel rsel = parse_point();
            expect(Tok::RParen, "')'");
            return SchemeExpr::glue(std::move(left), lsel, std::move(right), rsel);
        }
        fail("scheme constructor", name);
    }

    // Parses removal targets and merges them into the base term.
    SchemeExpr apply_removal(SchemeExpr base, SourceSpan at) {
        if (lex_.peek().kind == Tok::Ident) {
            // degree targets: deg d {, deg d}
            std::multiset<long> degrees;
            while (true) {
                Token kw = expect_ident("'deg'");
                if (kw.text != "deg") fail("'deg'", kw);
                degrees.insert(expect_int("degree"));
                if (lex_.peek().kind != Tok::Comma) break;
                lex_.take();
            }
            if (auto* cv = base.get_if<CurveTerm>()) {
                std::multiset<long> merged = cv->removed_degrees;
                merged.insert(degrees.begin(), degrees.end());
                return SchemeExpr::curve(cv->q, cv->numerator, std::move(merged));
            }
            throw Error(ErrCode::MissingPoint,
                        "degree removal applies to Curve terms only "
                        "(write A1 minus points as remove(Curve(q; 1); deg 1, ...))",
                        at);
        }
        std::vector<long> primes = int_list();
        if (auto* nr = base.get_if<NumberRingTerm>()) {
            std::set<long> merged = nr->removed_primes;
            merged.insert(primes.begin(), primes.end());
            return SchemeExpr::number_ring(nr->field, std::move(merged));
        }
        throw Error(ErrCode::MissingPoint,
                    "prime removal applies to number-ring terms only", at);
    }
};

void print_field(std::ostringstream& out, const FieldSpec& f) {
    switch (f.kind) {
    case FieldSpec::Kind::Rational: out << "Q"; return;
    case FieldSpec::Kind::Quadratic: out << "Quad(" << f.discriminant << ")"; return;
    case FieldSpec::Kind::Cyclotomic: out << "Cyclo(" << f.modulus << ")"; return;
    case FieldSpec::Kind::CyclotomicReal: out << "CycloPlus(" << f.modulus << ")"; return;
    case FieldSpec::Kind::AbelianByModulus: {
        out << "Abelian(" << f.modulus << "; ";
        for (std::size_t i = 0; i < f.subgroup_gens.size(); ++i) {
            if (i) out << ", ";
            out << f.subgroup_gens[i];
        }
        out << ")";
        return;
    }
    }
}

void print_point(std::ostringstream& out, const PointSel& sel) {
    if (sel.kind == PointSel::Kind::FiberOver) {
        out << "p=" << sel.p;
        if (sel.index != 0) out << "#" << sel.index;
    } else {
        out << "deg=" << sel.degree;
    }
}

void print_expr(std::ostringstream& out, const SchemeExpr& expr) {
    if (auto* nr = expr.get_if<NumberRingTerm>()) {
        std::ostringstream core;
        if (nr->field.kind == FieldSpec::Kind::Rational) {
            core << "SpecZ";
        } else {
            core << "SpecOF(";
            print_field(core, nr->field);
            core << ")";
        }
        if (nr->removed_primes.empty()) {
            out << core.str();
        } else {
            out << "remove(" << core.str() << "; ";
            bool first = true;
            for (long p : nr->removed_primes) {
                if (!first) out << ", ";
                first = false;
                out << p;
            }
            out << ")";
        }
        return;
    }
    if (auto* fq = expr.get_if<SpecFqTerm>()) {
        out << "SpecF(" << fq->q << ")";
        return;
    }
    if (auto* al = expr.get_if<AffineLineTerm>()) {
        out << "A1(" << al->q << ")";
        return;
    }
    if (auto* cv = expr.get_if<CurveTerm>()) {
        std::ostringstream core;
        core << "Curve(" << cv->q << "; ";
        for (std::size_t i = 0; i < cv->numerator.size(); ++i) {
            if (i) core << ", ";
            core << cv->numerator[i].get_str();
        }
        core << ")";
        if (cv->removed_degrees.empty()) {
            out << core.str();
        } else {
            out << "remove(" << core.str() << "; ";
            bool first = true;
            for (long d : cv->removed_degrees) {
                if (!first) out << ", ";
                first = false;
                out << "deg " << d;
            }
            out << ")";
        }
        return;
    }
    if (auto* dj = expr.get_if<DisjointTerm>()) {
        out << "union(";
        for (std::size_t i = 0; i < dj->parts.size(); ++i) {
            if (i) out << ", ";
            print_expr(out, dj->parts[i]);
        }
        out << ")";
        return;
    }
    auto* gl = expr.get_if<GlueTerm>();
    out << "glue(";
    print_expr(out, *gl->left);
    out << "@";
    print_point(out, gl->left_sel);
    out << ", ";
    print_expr(out, *gl->right);
    out << "@";
    print_point(out, gl->right_sel);
    out << ")";
}

} // namespace

SchemeExpr parse(const std::string& text) {
    Parser parser(text);
    return normalize(parser.parse_all());
}

std::string print(const SchemeExpr& expr) {
    std::ostringstream out;
    print_expr(out, expr);
    return out.str();
}

} // namespace zeta1d
