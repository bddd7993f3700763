#ifndef ZETA1D_LEDGER_HPP
#define ZETA1D_LEDGER_HPP

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zeta1d/numeric.hpp"
#include "zeta1d/scheme.hpp"
#include "zeta1d/zeta.hpp"

namespace zeta1d {

/// Per-degree structure of the motivic cohomology of a scheme at weight n.
///
/// The conserved quantity under localization is the multiplier
/// M = |H^0| / (|H^-1_tors| * |H^1|); individual orders are retained only when
/// supplied or forced by a degenerate localization sequence.
struct MotivicProfile {
    long n = -1;
    long rank_minus1 = 0; // = d_n
    long r1 = 0;          // drives the (Z/2)^r1 pattern in degrees >= 2
    std::optional<mpz_class> tors_minus1;
    std::optional<mpz_class> ord_h0;
    std::optional<mpz_class> ord_h1;
    std::optional<mpq_class> multiplier;

    bool orders_known() const { return tors_minus1 && ord_h0 && ord_h1; }
    /// Checks positivity and multiplier agreement; throws InconsistentWithStructure.
    void check_consistent() const;
};

MotivicProfile finite_field_profile(long q, long n);
MotivicProfile affine_line_profile(long q, long n);
MotivicProfile zero_dim_profile(const std::vector<mpz_class>& residue_sizes, long n);

/// Externally supplied cohomology orders for a number-ring expression.
struct BaseDataRecord {
    std::string scheme; // DSL text of a number-ring expression
    long n = -1;
    mpz_class tors_minus1, ord_h0, ord_h1;
    std::string provenance;
};

/// Record store keyed by (canonical printed scheme, n).
class BaseDataSet {
public:
    /// The built-in record: Spec Z at n = -3 with orders (240, 2, 1).
    static BaseDataSet shipped();
    static BaseDataSet empty() { return BaseDataSet(); }

    /// Loads a JSON array of records; validates each.
    void load_file(const std::string& path);
    void add(const BaseDataRecord& record);

    std::optional<MotivicProfile> lookup(const SchemeExpr& expr, long n) const;
    const std::vector<BaseDataRecord>& records() const { return records_; }

private:
    std::vector<BaseDataRecord> records_;
    std::map<std::pair<std::string, long>, std::size_t> index_;
};

/// U = X minus a zero-dimensional closed Z: multiplier picks up |H^1(Z)|,
/// torsion in degree -1 is unchanged.
MotivicProfile propagate_remove(const MotivicProfile& x, const MotivicProfile& z);
MotivicProfile propagate_union(const std::vector<MotivicProfile>& parts);
/// Two points of residue size N collapse to one: multiplier picks up N^-n - 1.
MotivicProfile propagate_glue(const MotivicProfile& a, const MotivicProfile& b,
                              const mpz_class& residue_size);

/// Full profile of an expression, combining built-ins, data records and the
/// propagation laws. Unknown fields stay unknown; the multiplier is carried
/// whenever every constituent supplies one.
MotivicProfile scheme_profile(const SchemeExpr& expr, long n, const BaseDataSet& data);

/// G_R-equivariant cohomology of X(C): rank of H^0_c and the Tate pattern.
struct EquivariantProfile {
    long h0c_rank = 0;      // = d_n
    mpz_class tate_order;   // 2^r1
    int parity = 0;         // residues i mod 2 carrying (Z/2)^r1
};

EquivariantProfile equivariant_profile(const SchemeExpr& expr, long n);

/// Weil-etale cohomology with compact support, concentrated in degrees 1..3.
struct WeilEtaleProfile {
    long rank_h1 = 0;
    mpz_class tors_h1; // |T_1| = |H^1| / 2^delta
    long rank_h2 = 0;
    mpz_class tors_h2; // |H^0|
    mpz_class tors_h3; // |H^-1_tors|
};

WeilEtaleProfile weil_etale_profile(const MotivicProfile& m, long n);

struct Regulator {
    enum class Kind { One, Symbolic, Numeric };
    Kind kind = Kind::One;
    RealBall value; // Numeric only

    static Regulator one() { return {Kind::One, RealBall()}; }
    static Regulator symbolic() { return {Kind::Symbolic, RealBall()}; }
    static Regulator numeric(RealBall v) { return {Kind::Numeric, std::move(v)}; }
};

/// Unsigned cohomological prediction |zeta*(X, n)| = 2^delta * M * R.
struct Prediction {
    long order = 0;
    long delta_exponent = 0;
    mpq_class cofactor; // 2^delta * multiplier
    Regulator::Kind regulator = Regulator::Kind::One;
    std::optional<mpq_class> exact_value;
    std::optional<RealBall> numeric_value;

    bool symbolic() const { return regulator == Regulator::Kind::Symbolic; }
};

Prediction predicted_special_value(const MotivicProfile& m, long n, const Regulator& regulator);

/// Inverts the prediction for the regulator: R = |leading| / (2^delta * M).
RealBall infer_regulator(const SpecialValue& analytic, const MotivicProfile& m, long n);

} // namespace zeta1d

#endif
