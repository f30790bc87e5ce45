#ifndef DNKW_HIROTA_HPP
#define DNKW_HIROTA_HPP

#include <functional>
#include <random>
#include <utility>
#include <vector>

#include <dnkw/principal_heisenberg.hpp>
#include <dnkw/series.hpp>

namespace dnkw
{

/// Variable spaces for one (n, N) pair: t alone, (t, y) jointly, and the formal
/// operator symbols D. All truncated at weighted degree N.
struct SeriesContext
{
    int n = 0;
    int degree = 0;
    SpacePtr t_space;
    SpacePtr ty_space;
    SpacePtr d_space;

    static SeriesContext make(int n, int degree);

    int h() const noexcept
    {
        return 2 * n - 2;
    }
};

using ExponentCoefficient = std::function<Complex(const Exponent &)>;

/// t_j -> t_j + sign * y_j; returns a series in ctx.ty_space.
TruncatedSeries shift_substitute(const TruncatedSeries &tau, int sign, const SeriesContext &ctx);

/// S_0..S_{m_max} with exp(sum_j c(j) v_j z^{value(j)}) = sum_m S_m z^m, v the variables
/// of family f in `space`.
std::vector<TruncatedSeries> schur_expand(const ExponentCoefficient &c, Family f, int m_max, const SpacePtr &space);

/// Same with coefficients depending on the residue label only.
std::vector<TruncatedSeries> schur_expand(const std::map<ExponentLabel, Complex> &c, Family f, int m_max,
                                          const SpacePtr &space);

/// Reads each monomial of `op` (family op_family) as a product of partial derivatives
/// with respect to the same-exponent variables of target_family, and applies it.
TruncatedSeries apply_differential(const TruncatedSeries &op, Family op_family, const TruncatedSeries &target,
                                   Family target_family);

/// tau1(t+y) tau2(t-y).
TruncatedSeries bilinear_pair(const TruncatedSeries &tau1, const TruncatedSeries &tau2, const SeriesContext &ctx);

/// D_{j1}...D_{jk} tau1.tau2 as a series in t. Only weights <= N - weight(D) are kept,
/// since higher ones would need terms beyond the truncation.
TruncatedSeries hirota_apply(const std::vector<Exponent> &d_monomial, const TruncatedSeries &tau1,
                             const TruncatedSeries &tau2, const SeriesContext &ctx);

/// Bilinear vertex operator applied to tau1(t+y) tau2(t-y) (Schur-polynomial route).
TruncatedSeries kw_lhs(const TruncatedSeries &tau1, const TruncatedSeries &tau2, const HierarchyCoefficients &coeffs,
                       const SeriesContext &ctx);

struct BilinearParts
{
    TruncatedSeries lhs;
    TruncatedSeries rhs;
};

/// Both sides of the residue-form equation, computed by Laurent expansion in z.
BilinearParts gm_parts(const TruncatedSeries &tau1, const TruncatedSeries &tau2, const HierarchyCoefficients &coeffs,
                       const SeriesContext &ctx, int window = -1);

/// lhs - rhs of the residue form. window defaults to N; a smaller window is a
/// configuration error.
TruncatedSeries gm_residual(const TruncatedSeries &tau1, const TruncatedSeries &tau2,
                            const HierarchyCoefficients &coeffs, const SeriesContext &ctx, int window = -1);

/// X^{(r)}(sign*t; z) tau as a Laurent series in z with t-series coefficients.
LaurentBlock vertex_apply(int r, const TruncatedSeries &tau, const HierarchyCoefficients &coeffs,
                          const SeriesContext &ctx, int window = -1, int sign = 1);

/// Elements of the affine algebra whose Fock-space action is available.
struct Generator
{
    enum class Kind
    {
        central,
        heisenberg_pos,
        heisenberg_neg,
        x_mode,
        /// Y^{(r)}_{-m}
        y_mode,
        degree,
    };
    Kind kind = Kind::central;
    Exponent exponent;
    int r = 0;
    int m = 0;

    static Generator central()
    {
        return {Kind::central, {}, 0, 0};
    }
    static Generator h_pos(const Exponent &e)
    {
        return {Kind::heisenberg_pos, e, 0, 0};
    }
    static Generator h_neg(const Exponent &e)
    {
        return {Kind::heisenberg_neg, e, 0, 0};
    }
    static Generator x_mode(int r, int m)
    {
        return {Kind::x_mode, {}, r, m};
    }
    /// Y^{(r)}_{-m}.
    static Generator y_mode(int r, int m)
    {
        return {Kind::y_mode, {}, r, m};
    }
    static Generator degree()
    {
        return {Kind::degree, {}, 0, 0};
    }
};

std::string to_string(const Generator &g);

TruncatedSeries algebra_action(const Generator &gen, const TruncatedSeries &tau, const HierarchyCoefficients &coeffs,
                               const SeriesContext &ctx);

struct OrbitReport
{
    /// Relative residuals of the eps^1 and eps^2 coefficients (order2 = 0 when not requested).
    double order1 = 0.0;
    double order2 = 0.0;
};

/// Expands the residue form on exp(eps*gen).1 to the requested order in eps.
OrbitReport orbit_infinitesimal_check(const Generator &gen, int order, const HierarchyCoefficients &coeffs,
                                      const SeriesContext &ctx);

using SymbolMonomial = std::vector<std::pair<Exponent, int>>;

std::string monomial_string(const SymbolMonomial &m, const char *prefix);
int monomial_weight(const SymbolMonomial &m);

struct DTerm
{
    SymbolMonomial monomial;
    Complex coefficient;
};

struct HierarchyEquation
{
    SymbolMonomial y_monomial;
    std::vector<DTerm> d_polynomial;
    /// Even-order part vanishes: the equation holds for every tau.tau.
    bool trivial = true;
};

/// One equation per y-monomial of weighted degree <= max_y_degree, graded-lex ordered.
std::vector<HierarchyEquation> equations_emit(const HierarchyCoefficients &coeffs, int max_y_degree,
                                              double eps = default_epsilon);

/// sum_terms c * hirota_apply(D-monomial, tau1, tau2).
TruncatedSeries apply_equation(const HierarchyEquation &eq, const TruncatedSeries &tau1, const TruncatedSeries &tau2,
                               const SeriesContext &ctx);

/// Coefficient of a family-f monomial in s, as a series over the remaining variables
/// re-encoded into `target`.
TruncatedSeries family_coefficient(const TruncatedSeries &s, Family f, const SymbolMonomial &monomial,
                                   const SpacePtr &target);

/// Random polynomial in t with every monomial of weight <= max_weight present and
/// coefficients uniform in [-1,1] x [-1,1].
TruncatedSeries random_tau(const SeriesContext &ctx, int max_weight, std::mt19937_64 &rng);

/// Truncation of exp(sum_j c_j t_j).
TruncatedSeries exp_linear_tau(const SeriesContext &ctx, const std::vector<std::pair<Exponent, Complex>> &c);

} // namespace dnkw

#endif
