#ifndef DNKW_MATRIX_ALGEBRA_HPP
#define DNKW_MATRIX_ALGEBRA_HPP

#include <vector>

#include <Eigen/Dense>

#include <dnkw/core.hpp>

namespace dnkw
{

using ColumnVector = Eigen::VectorXcd;

/// Dense 2n x 2n complex matrix in the orthogonal realization of D_n.
///
/// Element access is 1-based so that entries line up with the matrix-unit
/// notation e_{i,j} used for the Weyl generators; storage is a plain
/// Eigen matrix.
class SquareMatrix
{
public:
    SquareMatrix() = default;
    explicit SquareMatrix(int dim) : m_data(Eigen::MatrixXcd::Zero(dim, dim)) {}
    explicit SquareMatrix(Eigen::MatrixXcd data);

    static SquareMatrix identity(int dim);
    /// The matrix unit e_{i,j}.
    static SquareMatrix unit(int dim, int i, int j);

    int dim() const noexcept
    {
        return static_cast<int>(m_data.rows());
    }

    Complex &operator()(int i, int j)
    {
        return m_data(i - 1, j - 1);
    }
    const Complex &operator()(int i, int j) const
    {
        return m_data(i - 1, j - 1);
    }

    const Eigen::MatrixXcd &eigen() const noexcept
    {
        return m_data;
    }

    SquareMatrix &operator+=(const SquareMatrix &o);
    SquareMatrix &operator-=(const SquareMatrix &o);
    SquareMatrix &operator*=(Complex c);

    friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix &b)
    {
        return a += b;
    }
    friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix &b)
    {
        return a -= b;
    }
    friend SquareMatrix operator*(SquareMatrix a, Complex c)
    {
        return a *= c;
    }
    friend SquareMatrix operator*(Complex c, SquareMatrix a)
    {
        return a *= c;
    }
    friend SquareMatrix operator-(SquareMatrix a)
    {
        return a *= Complex(-1.0);
    }
    friend SquareMatrix operator*(const SquareMatrix &a, const SquareMatrix &b);
    friend ColumnVector operator*(const SquareMatrix &a, const ColumnVector &v);

    Complex trace() const
    {
        return m_data.trace();
    }
    /// Largest entry modulus.
    double max_norm() const;
    bool is_diagonal(double eps) const;

private:
    Eigen::MatrixXcd m_data;
};

SquareMatrix commutator(const SquareMatrix &a, const SquareMatrix &b);
SquareMatrix power(const SquareMatrix &a, int k);

/// max|a-b| <= eps * max(1, |a|, |b|).
bool approx_equal(const SquareMatrix &a, const SquareMatrix &b, double eps);

/// S = sum_{i=1}^{n} (-1)^{i-1} (e_{ii} + e_{2n+1-i,2n+1-i}).
SquareMatrix build_involution_matrix(int n);

/// Transposition along the anti-diagonal: result(i,j) = A(2n+1-j, 2n+1-i).
SquareMatrix anti_transpose(const SquareMatrix &a);

/// Anti-transpose of a column vector, i.e. the reversed row.
Eigen::RowVectorXcd anti_transpose(const ColumnVector &v);

/// A - S A^T S with ^T the anti-transpose; always lands in the algebra.
SquareMatrix sigma(const SquareMatrix &a);

/// True iff max|A + S A^T S| <= eps.
bool membership_check(const SquareMatrix &a, double eps = default_epsilon);

/// Normalized invariant form (A|B) = tr(AB)/2.
Complex killing_form(const SquareMatrix &a, const SquareMatrix &b);

/// e_i, f_i, h_i for i = 0..n, indexed directly by i.
struct WeylSystem
{
    std::vector<SquareMatrix> e;
    std::vector<SquareMatrix> f;
    std::vector<SquareMatrix> h;
};

WeylSystem weyl_generators(int n);

/// Extended Cartan matrix of D_n^(1) built from the Dynkin diagram: chain 1..n-1, node n
/// attached to n-2, node 0 attached to the neighbours of node 1.
Eigen::MatrixXi affine_cartan_matrix(int n);

struct GradingElement
{
    SquareMatrix rho_vee;
    /// d_1..d_{2n}, stored 0-based.
    std::vector<double> d;
};

/// Diagonal element with [rho, e_i] = e_i (i=1..n), obtained by solving the linear
/// constraints coming from the nonzero entries of e_1..e_n together with d_a = -d_{2n+1-a}.
GradingElement grading_element(int n);

/// Entries (a,b) of A with d_a - d_b = j, j in [-h, h].
SquareMatrix principal_component(const SquareMatrix &a, int j, const GradingElement &grading);

/// Component of A in the Z/hZ-gradation for residue m (any integer, taken mod h).
SquareMatrix cyclic_component(const SquareMatrix &a, int m, const GradingElement &grading);

/// -sum_{i=1}^{n-1} (n-i) b_i where b is the diagonal of A. Off-diagonal entries are ignored.
Complex coroot_coefficient_sum(const SquareMatrix &a);

} // namespace dnkw

#endif
