#include "zeta1d/scheme.hpp"

#include <algorithm>
#include <numeric>

#include "zeta1d/dirichlet.hpp"
#include "zeta1d/parser.hpp"

namespace zeta1d {

namespace {

constexpr long kMaxFieldModulus = 10000;

bool squarefree(long n) {
    if (n < 0) n = -n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0) return false;
    }
    return true;
}

long mod4(long d) { return ((d % 4) + 4) % 4; }

int moebius(long n) {
    int mu = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

} // namespace

bool is_fundamental_discriminant(long d) {
    if (d == 0 || d == 1) return false;
    if (mod4(d) == 1) return squarefree(d);
    if (d % 4 != 0) return false;
    long e = d / 4;
    return (mod4(e) == 2 || mod4(e) == 3) && squarefree(e);
}

FieldSpec FieldSpec::quadratic(long d) {
    FieldSpec f;
    f.kind = Kind::Quadratic;
    f.discriminant = d;
    return f;
}

FieldSpec FieldSpec::cyclotomic(long m) {
    FieldSpec f;
    f.kind = Kind::Cyclotomic;
    f.modulus = m;
    return f;
}

FieldSpec FieldSpec::cyclotomic_real(long m) {
    FieldSpec f;
    f.kind = Kind::CyclotomicReal;
    f.modulus = m;
    return f;
}

FieldSpec FieldSpec::abelian(long m, std::vector<long> gens) {
    FieldSpec f;
    f.kind = Kind::AbelianByModulus;
    f.modulus = m;
    f.subgroup_gens = std::move(gens);
    return f;
}

void FieldSpec::validate() const {
    switch (kind) {
    case Kind::Rational:
        return;
    case Kind::Quadratic:
        if (!is_fundamental_discriminant(discriminant))
            throw Error(ErrCode::InvalidField, "not a fundamental discriminant: " +
                                                   std::to_string(discriminant));
        if (discriminant > kMaxFieldModulus || discriminant < -kMaxFieldModulus)
            throw Error(ErrCode::InvalidField, "discriminant too large");
        return;
    case Kind::Cyclotomic:
    case Kind::CyclotomicReal:
        if (modulus < 3 || mod4(modulus) == 2)
            throw Error(ErrCode::InvalidField,
                        "cyclotomic modulus must be >= 3 and not 2 mod 4");
        if (modulus > kMaxFieldModulus) throw Error(ErrCode::InvalidField, "modulus too large");
        return;
    case Kind::AbelianByModulus: {
        if (modulus < 1) throw Error(ErrCode::InvalidField, "modulus must be >= 1");
        if (modulus > kMaxFieldModulus) throw Error(ErrCode::InvalidField, "modulus too large");
        for (long g : subgroup_gens) {
            long gm = ((g % modulus) + modulus) % modulus;
            if (std::gcd(gm == 0 ? modulus : gm, modulus) != 1)
                throw Error(ErrCode::InvalidField,
                            "subgroup generator " + std::to_string(g) + " is not a unit mod " +
                                std::to_string(modulus));
        }
        return;
    }
    }
}

std::pair<long, std::vector<long>> FieldSpec::modulus_subgroup() const {
    validate();
    UnitGroup trivial_group(1);
    switch (kind) {
    case Kind::Rational:
        return {1, {0}};
    case Kind::Quadratic: {
        long m = discriminant < 0 ? -discriminant : discriminant;
        UnitGroup U(m);
        std::vector<long> kernel;
        for (long u : U.elements()) {
            if (mpz_kronecker(mpz_class(discriminant).get_mpz_t(), mpz_class(u).get_mpz_t()) == 1)
                kernel.push_back(u);
        }
        return {m, kernel};
    }
    case Kind::Cyclotomic:
        return {modulus, {1}};
    case Kind::CyclotomicReal:
        return {modulus, {1, modulus - 1}};
    case Kind::AbelianByModulus: {
        UnitGroup U(modulus);
        return {modulus, U.span(subgroup_gens)};
    }
    }
    throw Error(ErrCode::InternalInconsistency, "unreachable");
}

long FieldSpec::degree() const {
    auto [m, h] = modulus_subgroup();
    UnitGroup U(m);
    return U.order() / static_cast<long>(h.size());
}

bool FieldSpec::totally_real() const {
    auto [m, h] = modulus_subgroup();
    if (m <= 2) return true;
    return std::binary_search(h.begin(), h.end(), m - 1);
}

long FieldSpec::r1() const { return totally_real() ? degree() : 0; }
long FieldSpec::r2() const { return totally_real() ? 0 : degree() / 2; }

bool FieldSpec::operator==(const FieldSpec& o) const {
    return kind == o.kind && discriminant == o.discriminant && modulus == o.modulus &&
           subgroup_gens == o.subgroup_gens;
}

PointSel PointSel::fiber_over(long p, long index) {
    PointSel s;
    s.kind = Kind::FiberOver;
    s.p = p;
    s.index = index;
    return s;
}

PointSel PointSel::curve_point(long degree) {
    PointSel s;
    s.kind = Kind::CurvePoint;
    s.degree = degree;
    return s;
}

bool PointSel::operator==(const PointSel& o) const {
    return kind == o.kind && p == o.p && index == o.index && degree == o.degree;
}

SchemeExpr SchemeExpr::number_ring(FieldSpec field, std::set<long> removed_primes) {
    return SchemeExpr(NumberRingTerm{std::move(field), std::move(removed_primes)});
}
SchemeExpr SchemeExpr::spec_fq(long q) { return SchemeExpr(SpecFqTerm{q}); }
SchemeExpr SchemeExpr::affine_line(long q) { return SchemeExpr(AffineLineTerm{q}); }
SchemeExpr SchemeExpr::curve(long q, std::vector<mpz_class> numerator,
                             std::multiset<long> removed_degrees) {
    return SchemeExpr(CurveTerm{q, std::move(numerator), std::move(removed_degrees)});
}
SchemeExpr SchemeExpr::disjoint(std::vector<SchemeExpr> parts) {
    return SchemeExpr(DisjointTerm{std::move(parts)});
}
SchemeExpr SchemeExpr::glue(SchemeExpr left, PointSel left_sel, SchemeExpr right,
                            PointSel right_sel) {
    return SchemeExpr(GlueTerm{std::make_shared<const SchemeExpr>(std::move(left)),
                               std::make_shared<const SchemeExpr>(std::move(right)), left_sel,
                               right_sel});
}

bool SchemeExpr::operator==(const SchemeExpr& o) const {
    if (term_ == o.term_) return true;
    if (term_->index() != o.term_->index()) return false;
    if (auto* a = get_if<NumberRingTerm>()) {
        auto* b = o.get_if<NumberRingTerm>();
        return a->field == b->field && a->removed_primes == b->removed_primes;
    }
    if (auto* a = get_if<SpecFqTerm>()) return a->q == o.get_if<SpecFqTerm>()->q;
    if (auto* a = get_if<AffineLineTerm>()) return a->q == o.get_if<AffineLineTerm>()->q;
    if (auto* a = get_if<CurveTerm>()) {
        auto* b = o.get_if<CurveTerm>();
        return a->q == b->q && a->numerator == b->numerator &&
               a->removed_degrees == b->removed_degrees;
    }
    if (auto* a = get_if<DisjointTerm>()) {
        auto* b = o.get_if<DisjointTerm>();
        return a->parts == b->parts;
    }
    auto* a = get_if<GlueTerm>();
    auto* b = o.get_if<GlueTerm>();
    return a->left_sel == b->left_sel && a->right_sel == b->right_sel && *a->left == *b->left &&
           *a->right == *b->right;
}

bool is_prime(long p) {
    if (p < 2) return false;
    return mpz_probab_prime_p(mpz_class(p).get_mpz_t(), 40) != 0;
}

bool is_prime_power(long q) {
    if (q < 2) return false;
    if (is_prime(q)) return true;
    mpz_class z(q);
    for (unsigned long k = 2; (1L << k) <= q; ++k) {
        mpz_class root;
        if (mpz_root(root.get_mpz_t(), z.get_mpz_t(), k) != 0)
            return is_prime(root.get_si());
    }
    return false;
}

std::vector<mpz_class> curve_point_counts(long q, const std::vector<mpz_class>& numerator,
                                          long max_degree) {
    // Power sums of the inverse roots via Newton's identities, then
    // N_e = q^e + 1 - p_e and Moebius inversion for exact-degree counts.
    long deg = static_cast<long>(numerator.size()) - 1;
    std::vector<mpz_class> elem(static_cast<std::size_t>(deg) + 1);
    for (long i = 0; i <= deg; ++i)
        elem[static_cast<std::size_t>(i)] =
            (i % 2 == 0 ? numerator[static_cast<std::size_t>(i)]
                        : -numerator[static_cast<std::size_t>(i)]);

    std::vector<mpz_class> psums(static_cast<std::size_t>(max_degree) + 1);
    for (long k = 1; k <= max_degree; ++k) {
        mpz_class pk = 0;
        for (long i = 1; i < k; ++i) {
            if (i > deg) break;
            mpz_class term = elem[static_cast<std::size_t>(i)] * psums[static_cast<std::size_t>(k - i)];
            pk += (i % 2 == 1) ? term : -term;
        }
        if (k <= deg) {
            mpz_class term = k * elem[static_cast<std::size_t>(k)];
            pk += (k % 2 == 1) ? term : -term;
        }
        psums[static_cast<std::size_t>(k)] = pk;
    }

    std::vector<mpz_class> counts(static_cast<std::size_t>(max_degree) + 1);
    for (long d = 1; d <= max_degree; ++d) {
        mpz_class total = 0;
        for (long e = 1; e <= d; ++e) {
            if (d % e != 0) continue;
            mpz_class qe;
            mpz_pow_ui(qe.get_mpz_t(), mpz_class(q).get_mpz_t(), static_cast<unsigned long>(e));
            mpz_class ne = qe + 1 - psums[static_cast<std::size_t>(e)];
            total += moebius(d / e) * ne;
        }
        if (total % d != 0)
            throw Error(ErrCode::InvalidCurve, "numerator does not define integral point counts");
        counts[static_cast<std::size_t>(d)] = total / d;
        if (counts[static_cast<std::size_t>(d)] < 0)
            throw Error(ErrCode::InvalidCurve, "numerator yields a negative point count");
    }
    return counts;
}

namespace {

void validate_curve_numerator(long q, const std::vector<mpz_class>& numerator) {
    if (numerator.empty() || numerator[0] != 1)
        throw Error(ErrCode::InvalidCurve, "curve numerator must have constant term 1");
    long deg = static_cast<long>(numerator.size()) - 1;
    if (deg % 2 != 0)
        throw Error(ErrCode::InvalidCurve, "curve numerator must have even degree");
    long g = deg / 2;
    // functional-equation symmetry c_{2g-i} = q^{g-i} c_i
    for (long i = 0; i <= g; ++i) {
        mpz_class qpow;
        mpz_pow_ui(qpow.get_mpz_t(), mpz_class(q).get_mpz_t(), static_cast<unsigned long>(g - i));
        if (numerator[static_cast<std::size_t>(deg - i)] !=
            qpow * numerator[static_cast<std::size_t>(i)])
            throw Error(ErrCode::InvalidCurve,
                        "curve numerator violates the functional-equation symmetry");
    }
    // Weil trace bound |c_1| <= 2g sqrt(q), i.e. c_1^2 <= 4 g^2 q
    if (deg >= 1) {
        mpz_class c1 = numerator[1];
        if (c1 * c1 > mpz_class(4) * g * g * q)
            throw Error(ErrCode::InvalidCurve, "curve numerator violates the Weil trace bound");
    }
}

mpz_class pow_long(long base, long exp) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), mpz_class(base).get_mpz_t(), static_cast<unsigned long>(exp));
    return r;
}

// Resolves a glue selection against a normalized atomic operand.
mpz_class resolve_selection(const SchemeExpr& expr, PointSel& sel) {
    if (auto* nr = expr.get_if<NumberRingTerm>()) {
        if (sel.kind != PointSel::Kind::FiberOver)
            throw Error(ErrCode::MissingPoint, "number-ring selection requires p=<prime>");
        if (!is_prime(sel.p))
            throw Error(ErrCode::MissingPoint, "selection p is not a rational prime");
        if (nr->removed_primes.count(sel.p))
            throw Error(ErrCode::MissingPoint,
                        "fiber over " + std::to_string(sel.p) + " has been removed");
        SplittingData s = splitting_data(nr->field, sel.p);
        if (sel.index < 0 || sel.index >= s.g)
            throw Error(ErrCode::MissingPoint, "point index exceeds the number of points above p");
        return pow_long(sel.p, s.f);
    }
    if (auto* fq = expr.get_if<SpecFqTerm>()) {
        if (sel.kind != PointSel::Kind::CurvePoint || sel.degree != 1)
            throw Error(ErrCode::MissingPoint, "Spec F_q has a single point, select deg=1");
        return mpz_class(fq->q);
    }
    if (auto* al = expr.get_if<AffineLineTerm>()) {
        if (sel.kind != PointSel::Kind::CurvePoint || sel.degree < 1)
            throw Error(ErrCode::MissingPoint, "curve selection requires deg=<positive>");
        return pow_long(al->q, sel.degree);
    }
    if (auto* cv = expr.get_if<CurveTerm>()) {
        if (sel.kind != PointSel::Kind::CurvePoint || sel.degree < 1)
            throw Error(ErrCode::MissingPoint, "curve selection requires deg=<positive>");
        auto counts = curve_point_counts(cv->q, cv->numerator, sel.degree);
        long removed_here = static_cast<long>(cv->removed_degrees.count(sel.degree));
        if (counts[static_cast<std::size_t>(sel.degree)] < removed_here + 1)
            throw Error(ErrCode::MissingPoint,
                        "curve has no remaining point of degree " + std::to_string(sel.degree));
        return pow_long(cv->q, sel.degree);
    }
    throw Error(ErrCode::MissingPoint,
                "glue selections resolve only against atomic components "
                "(number ring, Spec F_q, affine line, curve)");
}

} // namespace

SchemeExpr normalize(const SchemeExpr& expr) {
    if (auto* nr = expr.get_if<NumberRingTerm>()) {
        nr->field.validate();
        for (long p : nr->removed_primes)
            if (!is_prime(p))
                throw Error(ErrCode::MissingPoint,
                            "removal target " + std::to_string(p) + " is not a rational prime");
        return expr;
    }
    if (auto* fq = expr.get_if<SpecFqTerm>()) {
        if (!is_prime_power(fq->q))
            throw Error(ErrCode::InvalidField, std::to_string(fq->q) + " is not a prime power");
        return expr;
    }
    if (auto* al = expr.get_if<AffineLineTerm>()) {
        if (!is_prime_power(al->q))
            throw Error(ErrCode::InvalidCurve, std::to_string(al->q) + " is not a prime power");
        return expr;
    }
    if (auto* cv = expr.get_if<CurveTerm>()) {
        if (!is_prime_power(cv->q))
            throw Error(ErrCode::InvalidCurve, std::to_string(cv->q) + " is not a prime power");
        validate_curve_numerator(cv->q, cv->numerator);
        if (!cv->removed_degrees.empty()) {
            long maxd = *cv->removed_degrees.rbegin();
            auto counts = curve_point_counts(cv->q, cv->numerator, maxd);
            for (long d : std::set<long>(cv->removed_degrees.begin(), cv->removed_degrees.end())) {
                if (d < 1) throw Error(ErrCode::MissingPoint, "removed degree must be positive");
                long mult = static_cast<long>(cv->removed_degrees.count(d));
                if (counts[static_cast<std::size_t>(d)] < mult)
                    throw Error(ErrCode::MissingPoint, "curve has fewer points of degree " +
                                                           std::to_string(d) + " than removed");
            }
        }
        return expr;
    }
    if (auto* dj = expr.get_if<DisjointTerm>()) {
        std::vector<SchemeExpr> parts;
        for (const auto& part : dj->parts) {
            SchemeExpr norm = normalize(part);
            if (auto* sub = norm.get_if<DisjointTerm>())
                parts.insert(parts.end(), sub->parts.begin(), sub->parts.end());
            else
                parts.push_back(std::move(norm));
        }
        if (parts.empty())
            throw Error(ErrCode::MissingPoint, "empty union is not a scheme expression");
        if (parts.size() == 1) return parts[0];
        std::stable_sort(parts.begin(), parts.end(),
                         [](const SchemeExpr& a, const SchemeExpr& b) {
                             return print(a) < print(b);
                         });
        return SchemeExpr::disjoint(std::move(parts));
    }
    auto* gl = expr.get_if<GlueTerm>();
    SchemeExpr left = normalize(*gl->left);
    SchemeExpr right = normalize(*gl->right);
    PointSel lsel = gl->left_sel;
    PointSel rsel = gl->right_sel;
    mpz_class ln = resolve_selection(left, lsel);
    mpz_class rn = resolve_selection(right, rsel);
    if (ln != rn)
        throw Error(ErrCode::GlueMismatch, "glued points have different residue sizes (" +
                                               ln.get_str() + " vs " + rn.get_str() + ")");
    lsel.residue_size = ln;
    rsel.residue_size = rn;
    return SchemeExpr::glue(std::move(left), lsel, std::move(right), rsel);
}

namespace {

void accumulate_places(const SchemeExpr& expr, PlaceProfile& out) {
    if (auto* nr = expr.get_if<NumberRingTerm>()) {
        out.r1 += nr->field.r1();
        out.r2 += nr->field.r2();
        out.generic_chars.push_back(0);
        return;
    }
    if (auto* fq = expr.get_if<SpecFqTerm>()) {
        long q = fq->q;
        for (long p = 2;; ++p)
            if (q % p == 0) { out.generic_chars.push_back(p); break; }
        return;
    }
    if (auto* al = expr.get_if<AffineLineTerm>()) {
        long q = al->q;
        for (long p = 2;; ++p)
            if (q % p == 0) { out.generic_chars.push_back(p); break; }
        return;
    }
    if (auto* cv = expr.get_if<CurveTerm>()) {
        long q = cv->q;
        for (long p = 2;; ++p)
            if (q % p == 0) { out.generic_chars.push_back(p); break; }
        return;
    }
    if (auto* dj = expr.get_if<DisjointTerm>()) {
        for (const auto& part : dj->parts) accumulate_places(part, out);
        return;
    }
    auto* gl = expr.get_if<GlueTerm>();
    accumulate_places(*gl->left, out);
    accumulate_places(*gl->right, out);
}

} // namespace

PlaceProfile archimedean_profile(const SchemeExpr& expr) {
    PlaceProfile out;
    accumulate_places(expr, out);
    return out;
}

long vanishing_order(const SchemeExpr& expr, long n) {
    if (n >= 0) throw Error(ErrCode::NonNegativeWeight, "weight must be strictly negative");
    PlaceProfile p = archimedean_profile(expr);
    return (n % 2 == 0) ? p.r1 + p.r2 : p.r2;
}

long delta(const SchemeExpr& expr, long n) {
    if (n >= 0) throw Error(ErrCode::NonNegativeWeight, "weight must be strictly negative");
    return (n % 2 == 0) ? archimedean_profile(expr).r1 : 0;
}

} // namespace zeta1d
