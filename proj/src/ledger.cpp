#include "zeta1d/ledger.hpp"

#include <fstream>

#include <json.hpp>

#include "zeta1d/dirichlet.hpp"
#include "zeta1d/parser.hpp"

namespace zeta1d {

namespace {

mpz_class pow_mpz(const mpz_class& base, long exp) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(exp));
    return r;
}

void require_negative(long n) {
    if (n >= 0) throw Error(ErrCode::NonNegativeWeight, "weight must be strictly negative");
}

mpz_class two_pow(long e) { return mpz_class(1) << e; }

long delta_of(long r1, long n) { return (n % 2 == 0) ? r1 : 0; }

} // namespace

void MotivicProfile::check_consistent() const {
    if (tors_minus1 && *tors_minus1 < 1)
        throw Error(ErrCode::InconsistentWithStructure, "nonpositive |H^-1_tors|");
    if (ord_h0 && *ord_h0 < 1)
        throw Error(ErrCode::InconsistentWithStructure, "nonpositive |H^0|");
    if (ord_h1 && *ord_h1 < 1)
        throw Error(ErrCode::InconsistentWithStructure, "nonpositive |H^1|");
    if (orders_known() && multiplier) {
        mpq_class expected = mpq_class(*ord_h0) / mpq_class(*tors_minus1 * *ord_h1);
        expected.canonicalize();
        if (expected != *multiplier)
            throw Error(ErrCode::InconsistentWithStructure,
                        "multiplier disagrees with the stored orders");
    }
}

MotivicProfile finite_field_profile(long q, long n) {
    require_negative(n);
    if (!is_prime_power(q)) throw Error(ErrCode::InvalidField, "q must be a prime power");
    MotivicProfile m;
    m.n = n;
    m.rank_minus1 = 0;
    m.r1 = 0;
    m.tors_minus1 = mpz_class(1);
    m.ord_h0 = mpz_class(1);
    m.ord_h1 = pow_mpz(q, -n) - 1;
    m.multiplier = mpq_class(1) / mpq_class(*m.ord_h1);
    m.check_consistent();
    return m;
}

MotivicProfile affine_line_profile(long q, long n) {
    require_negative(n);
    if (!is_prime_power(q)) throw Error(ErrCode::InvalidCurve, "q must be a prime power");
    MotivicProfile m;
    m.n = n;
    m.rank_minus1 = 0;
    m.r1 = 0;
    m.tors_minus1 = pow_mpz(q, 1 - n) - 1;
    m.ord_h0 = mpz_class(1);
    m.ord_h1 = mpz_class(1);
    m.multiplier = mpq_class(1) / mpq_class(*m.tors_minus1);
    m.check_consistent();
    return m;
}

MotivicProfile zero_dim_profile(const std::vector<mpz_class>& residue_sizes, long n) {
    require_negative(n);
    MotivicProfile m;
    m.n = n;
    m.rank_minus1 = 0;
    m.r1 = 0;
    m.tors_minus1 = mpz_class(1);
    m.ord_h0 = mpz_class(1);
    mpz_class h1(1);
    for (const auto& size : residue_sizes) {
        if (size < 2) throw Error(ErrCode::MissingPoint, "residue size must be at least 2");
        h1 *= pow_mpz(size, -n) - 1;
    }
    m.ord_h1 = h1;
    m.multiplier = mpq_class(1) / mpq_class(h1);
    m.check_consistent();
    return m;
}

BaseDataSet BaseDataSet::shipped() {
    BaseDataSet data;
    BaseDataRecord record;
    record.scheme = "SpecZ";
    record.n = -3;
    record.tors_minus1 = 240;
    record.ord_h0 = 2;
    record.ord_h1 = 1;
    record.provenance = "K_7(Z) = Z/240, H^0 = Z/2, H^1 = 0";
    data.add(record);
    return data;
}

void BaseDataSet::add(const BaseDataRecord& record) {
    if (record.n >= 0)
        throw Error(ErrCode::MalformedData, "record weight must be strictly negative");
    SchemeExpr expr;
    try {
        expr = parse(record.scheme);
    } catch (const Error& e) {
        throw Error(ErrCode::MalformedData,
                    std::string("record scheme does not parse: ") + e.what());
    }
    auto* nr = expr.get_if<NumberRingTerm>();
    if (!nr)
        throw Error(ErrCode::MalformedData,
                    "record scheme must be a number-ring expression: " + record.scheme);
    if (record.tors_minus1 < 1 || record.ord_h0 < 1 || record.ord_h1 < 1)
        throw Error(ErrCode::InconsistentWithStructure, "record orders must be positive");

    // |H^1| = 2^r1 for even n (exactly, for the full ring of integers; a
    // divisor after localization), trivial for odd n.
    long r1 = nr->field.r1();
    if (record.n % 2 != 0) {
        if (record.ord_h1 != 1)
            throw Error(ErrCode::InconsistentWithStructure,
                        "|H^1| must be trivial at odd weights for number rings");
    } else {
        mpz_class bound = two_pow(r1);
        if (nr->removed_primes.empty()) {
            if (record.ord_h1 != bound)
                throw Error(ErrCode::InconsistentWithStructure,
                            "|H^1| must equal 2^r1 at even weights for maximal orders");
        } else if (bound % record.ord_h1 != 0) {
            throw Error(ErrCode::InconsistentWithStructure,
                        "|H^1| must divide 2^r1 at even weights");
        }
    }

    std::string key = print(expr);
    auto [it, inserted] = index_.try_emplace({key, record.n}, records_.size());
    if (inserted) {
        records_.push_back(record);
        records_.back().scheme = key;
    } else {
        records_[it->second] = record;
        records_[it->second].scheme = key;
    }
}

void BaseDataSet::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrCode::MalformedData, "cannot open data file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw Error(ErrCode::MalformedData, std::string("bad JSON in ") + path + ": " + e.what());
    }
    if (!doc.is_array()) throw Error(ErrCode::MalformedData, "data file must hold a JSON array");
    for (const auto& item : doc) {
        if (!item.is_object()) throw Error(ErrCode::MalformedData, "record must be an object");
        BaseDataRecord record;
        try {
            record.scheme = item.at("scheme").get<std::string>();
            record.n = item.at("n").get<long>();
            record.tors_minus1 = mpz_class(item.at("tors_minus1").get<std::string>());
            record.ord_h0 = mpz_class(item.at("ord_H0").get<std::string>());
            record.ord_h1 = mpz_class(item.at("ord_H1").get<std::string>());
            record.provenance = item.value("provenance", std::string());
        } catch (const std::exception& e) {
            throw Error(ErrCode::MalformedData, std::string("bad record: ") + e.what());
        }
        add(record);
    }
}

std::optional<MotivicProfile> BaseDataSet::lookup(const SchemeExpr& expr, long n) const {
    auto* nr = expr.get_if<NumberRingTerm>();
    if (!nr) return std::nullopt;
    auto it = index_.find({print(expr), n});
    if (it == index_.end()) return std::nullopt;
    const BaseDataRecord& record = records_[it->second];
    MotivicProfile m;
    m.n = n;
    m.rank_minus1 = vanishing_order(expr, n);
    m.r1 = nr->field.r1();
    m.tors_minus1 = record.tors_minus1;
    m.ord_h0 = record.ord_h0;
    m.ord_h1 = record.ord_h1;
    mpq_class mult = mpq_class(record.ord_h0) / mpq_class(record.tors_minus1 * record.ord_h1);
    mult.canonicalize();
    m.multiplier = mult;
    m.check_consistent();
    return m;
}

MotivicProfile propagate_remove(const MotivicProfile& x, const MotivicProfile& z) {
    if (x.n != z.n) throw Error(ErrCode::WeightMismatch, "profiles have different weights");
    if (!z.ord_h1)
        throw Error(ErrCode::IncompleteProfile, "removed part needs a known |H^1|");
    MotivicProfile u;
    u.n = x.n;
    u.rank_minus1 = x.rank_minus1;
    u.r1 = x.r1;
    u.tors_minus1 = x.tors_minus1; // |H^-1(X)_tors| = |H^-1(U)_tors|
    if (x.multiplier) {
        mpq_class mult = *x.multiplier * mpq_class(*z.ord_h1);
        mult.canonicalize();
        u.multiplier = mult;
    }
    // The five-term sequence pins the individual orders only when one side
    // is trivial.
    if (x.ord_h1 && *x.ord_h1 == 1) {
        u.ord_h1 = mpz_class(1);
        if (x.ord_h0) u.ord_h0 = *x.ord_h0 * *z.ord_h1;
    } else if (*z.ord_h1 == 1) {
        u.ord_h0 = x.ord_h0;
        u.ord_h1 = x.ord_h1;
    }
    u.check_consistent();
    return u;
}

MotivicProfile propagate_union(const std::vector<MotivicProfile>& parts) {
    if (parts.empty()) {
        MotivicProfile empty;
        empty.n = -1;
        empty.tors_minus1 = mpz_class(1);
        empty.ord_h0 = mpz_class(1);
        empty.ord_h1 = mpz_class(1);
        empty.multiplier = mpq_class(1);
        return empty;
    }
    MotivicProfile acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const MotivicProfile& p = parts[i];
        if (p.n != acc.n) throw Error(ErrCode::WeightMismatch, "profiles have different weights");
        acc.rank_minus1 += p.rank_minus1;
        acc.r1 += p.r1;
        auto mul_opt = [](std::optional<mpz_class>& a, const std::optional<mpz_class>& b) {
            if (a && b)
                *a *= *b;
            else
                a.reset();
        };
        mul_opt(acc.tors_minus1, p.tors_minus1);
        mul_opt(acc.ord_h0, p.ord_h0);
        mul_opt(acc.ord_h1, p.ord_h1);
        if (acc.multiplier && p.multiplier) {
            mpq_class mult = *acc.multiplier * *p.multiplier;
            mult.canonicalize();
            acc.multiplier = mult;
        } else {
            acc.multiplier.reset();
        }
    }
    acc.check_consistent();
    return acc;
}

MotivicProfile propagate_glue(const MotivicProfile& a, const MotivicProfile& b,
                              const mpz_class& residue_size) {
    if (a.n != b.n) throw Error(ErrCode::WeightMismatch, "profiles have different weights");
    if (residue_size < 2) throw Error(ErrCode::MissingPoint, "residue size must be at least 2");
    MotivicProfile x;
    x.n = a.n;
    x.rank_minus1 = a.rank_minus1 + b.rank_minus1;
    x.r1 = a.r1 + b.r1;
    if (a.tors_minus1 && b.tors_minus1) x.tors_minus1 = *a.tors_minus1 * *b.tors_minus1;
    mpz_class correction = pow_mpz(residue_size, -a.n) - 1;
    if (a.multiplier && b.multiplier) {
        mpq_class mult = *a.multiplier * *b.multiplier * mpq_class(correction);
        mult.canonicalize();
        x.multiplier = mult;
    }
    // |H^1(Z)| = 1 makes the localization sequence against the glued point
    // degenerate, so the separate orders survive.
    if (correction == 1 && a.ord_h0 && b.ord_h0 && a.ord_h1 && b.ord_h1) {
        x.ord_h0 = *a.ord_h0 * *b.ord_h0;
        x.ord_h1 = *a.ord_h1 * *b.ord_h1;
    }
    x.check_consistent();
    return x;
}

MotivicProfile scheme_profile(const SchemeExpr& expr, long n, const BaseDataSet& data) {
    require_negative(n);
    if (auto* nr = expr.get_if<NumberRingTerm>()) {
        if (auto direct = data.lookup(expr, n)) return *direct;
        if (!nr->removed_primes.empty()) {
            SchemeExpr base = SchemeExpr::number_ring(nr->field);
            if (auto base_profile = data.lookup(base, n)) {
                std::vector<mpz_class> sizes;
                for (long p : nr->removed_primes) {
                    SplittingData s = splitting_data(nr->field, p);
                    for (long i = 0; i < s.g; ++i) sizes.push_back(pow_mpz(p, s.f));
                }
                return propagate_remove(*base_profile, zero_dim_profile(sizes, n));
            }
        }
        MotivicProfile unknown;
        unknown.n = n;
        unknown.rank_minus1 = vanishing_order(expr, n);
        unknown.r1 = nr->field.r1();
        return unknown;
    }
    if (auto* fq = expr.get_if<SpecFqTerm>()) return finite_field_profile(fq->q, n);
    if (auto* al = expr.get_if<AffineLineTerm>()) return affine_line_profile(al->q, n);
    if (expr.get_if<CurveTerm>()) {
        MotivicProfile unknown;
        unknown.n = n;
        unknown.rank_minus1 = 0;
        unknown.r1 = 0;
        return unknown;
    }
    if (auto* dj = expr.get_if<DisjointTerm>()) {
        std::vector<MotivicProfile> parts;
        parts.reserve(dj->parts.size());
        for (const auto& part : dj->parts) parts.push_back(scheme_profile(part, n, data));
        return propagate_union(parts);
    }
    auto* gl = expr.get_if<GlueTerm>();
    if (!gl->left_sel.resolved())
        throw Error(ErrCode::InternalInconsistency,
                    "scheme_profile requires a normalized expression");
    return propagate_glue(scheme_profile(*gl->left, n, data), scheme_profile(*gl->right, n, data),
                          gl->left_sel.residue_size);
}

EquivariantProfile equivariant_profile(const SchemeExpr& expr, long n) {
    require_negative(n);
    PlaceProfile places = archimedean_profile(expr);
    EquivariantProfile e;
    e.h0c_rank = vanishing_order(expr, n);
    e.tate_order = two_pow(places.r1);
    e.parity = static_cast<int>(((n % 2) + 2) % 2);
    return e;
}

WeilEtaleProfile weil_etale_profile(const MotivicProfile& m, long n) {
    require_negative(n);
    if (m.n != n) throw Error(ErrCode::WeightMismatch, "profile weight differs from n");
    if (!m.orders_known())
        throw Error(ErrCode::IncompleteProfile, "Weil-etale profile needs all three orders");
    long d = delta_of(m.r1, n);
    mpz_class two_delta = two_pow(d);
    if (*m.ord_h1 % two_delta != 0)
        throw Error(ErrCode::NonIntegralT1, "2^delta does not divide |H^1|");
    WeilEtaleProfile w;
    w.rank_h1 = m.rank_minus1;
    w.tors_h1 = *m.ord_h1 / two_delta;
    w.rank_h2 = m.rank_minus1;
    w.tors_h2 = *m.ord_h0;
    w.tors_h3 = *m.tors_minus1;
    return w;
}

Prediction predicted_special_value(const MotivicProfile& m, long n, const Regulator& regulator) {
    require_negative(n);
    if (m.n != n) throw Error(ErrCode::WeightMismatch, "profile weight differs from n");
    if (!m.multiplier)
        throw Error(ErrCode::IncompleteProfile, "multiplier unknown; supply cohomology data");
    Prediction p;
    p.order = m.rank_minus1;
    p.delta_exponent = delta_of(m.r1, n);
    p.cofactor = mpq_class(two_pow(p.delta_exponent)) * *m.multiplier;
    p.cofactor.canonicalize();
    p.regulator = regulator.kind;
    switch (regulator.kind) {
    case Regulator::Kind::One:
        if (m.rank_minus1 > 0)
            throw Error(ErrCode::RegulatorRequired,
                        "d_n > 0: the regulator is not 1; pass a numeric or symbolic regulator");
        p.exact_value = p.cofactor;
        break;
    case Regulator::Kind::Symbolic:
        break;
    case Regulator::Kind::Numeric:
        p.numeric_value = RealBall::from_rational(p.cofactor, regulator.value.prec()) *
                          regulator.value;
        break;
    }
    return p;
}

RealBall infer_regulator(const SpecialValue& analytic, const MotivicProfile& m, long n) {
    require_negative(n);
    if (m.n != n) throw Error(ErrCode::WeightMismatch, "profile weight differs from n");
    if (!m.multiplier)
        throw Error(ErrCode::IncompleteProfile, "multiplier unknown; supply cohomology data");
    if (m.rank_minus1 == 0 || analytic.order != m.rank_minus1)
        throw Error(ErrCode::OrderMismatch,
                    "regulator inference needs analytic order = d_n > 0");
    mpq_class cofactor = mpq_class(two_pow(delta_of(m.r1, n))) * *m.multiplier;
    cofactor.canonicalize();
    mpfr_prec_t prec = analytic.mode == ValueMode::Numeric ? analytic.numeric.prec() : 128;
    return analytic.abs_ball(prec) / RealBall::from_rational(cofactor, prec);
}

} // namespace zeta1d
