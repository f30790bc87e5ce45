#ifndef DNKW_PRINCIPAL_HEISENBERG_HPP
#define DNKW_PRINCIPAL_HEISENBERG_HPP

#include <compare>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <dnkw/matrix_algebra.hpp>

namespace dnkw
{

/// Residue label of an exponent of D_n: an odd value in 1..2n-3, or the extra
/// label (n-1)' which doubles the exponent n-1 (only distinct for even n).
struct ExponentLabel
{
    int value = 1;
    bool primed = false;

    auto operator<=>(const ExponentLabel &) const = default;
};

/// "3" or "3p".
std::string to_string(const ExponentLabel &label);

/// Labels in increasing value, unprimed before primed.
std::vector<ExponentLabel> exponent_labels(int n);

bool is_valid_label(int n, const ExponentLabel &label);

/// v -> h - v for unprimed labels; the primed label is fixed.
ExponentLabel negate_label(int n, const ExponentLabel &label);

/// Eigenvalue of the cyclic element: omega^s, or one of the two kernel directions.
struct EigenvalueTag
{
    enum class Kind
    {
        root,
        zero,
        zero_prime
    };
    Kind kind = Kind::root;
    int s = 0;

    static EigenvalueTag root(int s)
    {
        return {Kind::root, s};
    }
    static EigenvalueTag zero()
    {
        return {Kind::zero, 0};
    }
    static EigenvalueTag zero_prime()
    {
        return {Kind::zero_prime, 0};
    }

    bool operator==(const EigenvalueTag &) const = default;
};

/// Tag of the negated eigenvalue: omega^s -> omega^{s+h/2}; kernel tags are fixed.
EigenvalueTag negate(const EigenvalueTag &tag, int h);

/// Numeric eigenvalue (0 for the kernel tags).
Complex eigenvalue(const EigenvalueTag &tag, int h);

/// omega = exp(2 pi i / h).
Complex primitive_root(int h);

/// 1 for even n, i for odd n.
Complex kappa(int n);

/// Lambda = e_0 + ... + e_n.
SquareMatrix cyclic_element(int n);

/// T_v = Lambda^v for unprimed labels, plus the explicit T_{(n-1)'}.
std::map<ExponentLabel, SquareMatrix> heisenberg_basis(int n);

ColumnVector eta(int n, const EigenvalueTag &tag);

/// A_{(a,b)} = sigma(eta_a * eta_{-b}^T), ^T the anti-transpose.
SquareMatrix root_matrix(int n, const EigenvalueTag &alpha, const EigenvalueTag &beta);

/// The pair of bases X~^{(r)}_m, Y~^{(r)}_m (r = 1..n, m in Z/hZ) and the Heisenberg
/// basis they are graded against.
struct DualBases
{
    int n = 0;
    int h = 0;
    GradingElement grading;
    std::map<ExponentLabel, SquareMatrix> heisenberg;
    /// x[r][m], y[r][m]; index r from 1, row 0 unused.
    std::vector<std::vector<SquareMatrix>> x;
    std::vector<std::vector<SquareMatrix>> y;

    const SquareMatrix &x_at(int r, int m) const;
    const SquareMatrix &y_at(int r, int m) const;

    /// X~^{(r)} -> c_r X~^{(r)}, Y~^{(r)} -> Y~^{(r)} / c_r. Index r from 1.
    DualBases rescaled(const std::vector<Complex> &c) const;
};

DualBases dual_bases(int n);

/// Thread-safe per-rank cache; each rank is built once.
std::shared_ptr<const DualBases> cached_dual_bases(int n);

/// Proportionality constant of [sqrt2 T_label, X~^{(r)}_0] against X~^{(r)}_{label.value}.
/// The Y relation with the opposite sign is checked as well.
Complex beta_extract(int r, const ExponentLabel &label, const DualBases &bases, double eps = default_epsilon);

Complex beta_closed(int n, int r, const ExponentLabel &label);

/// (rho|X~^{(r)}_0)(rho|Y~^{(r)}_0) through the coroot-coefficient sum.
Complex g_extract(int r, const DualBases &bases);

Complex g_closed(int n, int r);

/// n h (h+1) / 12.
double g_sum_target(int n);

/// beta_{r,label}, g_r and the rho pairings needed by the vertex-operator representation.
struct HierarchyCoefficients
{
    int n = 0;
    int h = 0;
    Complex kappa;
    /// beta[r][label], index r from 1.
    std::vector<std::map<ExponentLabel, Complex>> beta;
    std::vector<Complex> g;
    /// (rho|X~^{(r)}_0) and (rho|Y~^{(r)}_0); empty when not available.
    std::vector<Complex> rho_x;
    std::vector<Complex> rho_y;

    Complex beta_at(int r, const ExponentLabel &label) const;
    Complex g_sum() const;
    bool has_rho_pairings() const
    {
        return !rho_x.empty();
    }
};

/// Coefficients computed from the matrix realization.
HierarchyCoefficients extract_coefficients(int n, double eps = default_epsilon);

/// Coefficients from the closed forms; no rho pairings.
HierarchyCoefficients closed_coefficients(int n);

} // namespace dnkw

#endif
