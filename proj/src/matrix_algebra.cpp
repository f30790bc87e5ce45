#include <dnkw/matrix_algebra.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace dnkw
{

const char *to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::rank_too_small: return "rank-too-small";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::singular_system: return "singular-system";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::invalid_tag: return "invalid-tag";
    case ErrorCode::proportionality_failure: return "proportionality-failure";
    case ErrorCode::truncation_mismatch: return "truncation-mismatch";
    case ErrorCode::window_overflow: return "window-overflow";
    case ErrorCode::layout_overflow: return "layout-overflow";
    case ErrorCode::unknown_generator: return "unknown-generator";
    }
    return "unknown";
}

AlgebraConfig::AlgebraConfig(int n, double epsilon) : m_n(n), m_epsilon(epsilon)
{
    if (n < 3)
        throw Error(ErrorCode::rank_too_small, "D_n requires n >= 3, got " + std::to_string(n));
    if (!(epsilon > 0.0 && epsilon < 1e-6))
        throw Error(ErrorCode::out_of_range, "epsilon must lie in (0, 1e-6)");
}

namespace
{

void require_rank(int n)
{
    if (n < 3)
        throw Error(ErrorCode::rank_too_small, "D_n requires n >= 3, got " + std::to_string(n));
}

void require_same_dim(const SquareMatrix &a, const SquareMatrix &b)
{
    if (a.dim() != b.dim())
        throw Error(ErrorCode::dimension_mismatch,
                    "matrix dimensions differ: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

int rank_of(const SquareMatrix &a)
{
    if (a.dim() % 2 != 0)
        throw Error(ErrorCode::dimension_mismatch, "realization matrices have even dimension");
    return a.dim() / 2;
}

} // namespace

SquareMatrix::SquareMatrix(Eigen::MatrixXcd data) : m_data(std::move(data))
{
    if (m_data.rows() != m_data.cols())
        throw Error(ErrorCode::dimension_mismatch, "matrix is not square");
}

SquareMatrix SquareMatrix::identity(int dim)
{
    return SquareMatrix(Eigen::MatrixXcd::Identity(dim, dim));
}

SquareMatrix SquareMatrix::unit(int dim, int i, int j)
{
    SquareMatrix m(dim);
    m(i, j) = 1.0;
    return m;
}

SquareMatrix &SquareMatrix::operator+=(const SquareMatrix &o)
{
    require_same_dim(*this, o);
    m_data += o.m_data;
    return *this;
}

SquareMatrix &SquareMatrix::operator-=(const SquareMatrix &o)
{
    require_same_dim(*this, o);
    m_data -= o.m_data;
    return *this;
}

SquareMatrix &SquareMatrix::operator*=(Complex c)
{
    m_data *= c;
    return *this;
}

SquareMatrix operator*(const SquareMatrix &a, const SquareMatrix &b)
{
    require_same_dim(a, b);
    return SquareMatrix(Eigen::MatrixXcd(a.m_data * b.m_data));
}

ColumnVector operator*(const SquareMatrix &a, const ColumnVector &v)
{
    if (v.size() != a.dim())
        throw Error(ErrorCode::dimension_mismatch, "vector length does not match matrix");
    return a.m_data * v;
}

double SquareMatrix::max_norm() const
{
    return m_data.size() == 0 ? 0.0 : m_data.cwiseAbs().maxCoeff();
}

bool SquareMatrix::is_diagonal(double eps) const
{
    for (int i = 0; i < m_data.rows(); ++i)
        for (int j = 0; j < m_data.cols(); ++j)
            if (i != j && std::abs(m_data(i, j)) > eps)
                return false;
    return true;
}

SquareMatrix commutator(const SquareMatrix &a, const SquareMatrix &b)
{
    return a * b - b * a;
}

SquareMatrix power(const SquareMatrix &a, int k)
{
    auto out = SquareMatrix::identity(a.dim());
    for (int i = 0; i < k; ++i)
        out = out * a;
    return out;
}

bool approx_equal(const SquareMatrix &a, const SquareMatrix &b, double eps)
{
    const double scale = std::max({1.0, a.max_norm(), b.max_norm()});
    return (a - b).max_norm() <= eps * scale;
}

SquareMatrix build_involution_matrix(int n)
{
    require_rank(n);
    const int dim = 2 * n;
    SquareMatrix s(dim);
    for (int i = 1; i <= n; ++i) {
        const double sign = (i % 2 == 1) ? 1.0 : -1.0;
        s(i, i) += sign;
        s(dim + 1 - i, dim + 1 - i) += sign;
    }
    return s;
}

SquareMatrix anti_transpose(const SquareMatrix &a)
{
    const int dim = a.dim();
    SquareMatrix out(dim);
    for (int i = 1; i <= dim; ++i)
        for (int j = 1; j <= dim; ++j)
            out(i, j) = a(dim + 1 - j, dim + 1 - i);
    return out;
}

Eigen::RowVectorXcd anti_transpose(const ColumnVector &v)
{
    return v.reverse().transpose();
}

SquareMatrix sigma(const SquareMatrix &a)
{
    const auto s = build_involution_matrix(rank_of(a));
    return a - s * anti_transpose(a) * s;
}

bool membership_check(const SquareMatrix &a, double eps)
{
    if (a.dim() < 6 || a.dim() % 2 != 0)
        return false;
    const auto s = build_involution_matrix(rank_of(a));
    return (a + s * anti_transpose(a) * s).max_norm() <= eps;
}

Complex killing_form(const SquareMatrix &a, const SquareMatrix &b)
{
    require_same_dim(a, b);
    // tr(AB) without forming the product.
    return (a.eigen().transpose().cwiseProduct(b.eigen())).sum() / 2.0;
}

WeylSystem weyl_generators(int n)
{
    require_rank(n);
    const int d = 2 * n;
    auto u = [d](int i, int j) { return SquareMatrix::unit(d, i, j); };

    WeylSystem w;
    w.e.resize(n + 1);
    w.f.resize(n + 1);
    w.h.resize(n + 1);
    for (int i = 1; i <= n - 1; ++i) {
        w.e[i] = u(i + 1, i) + u(d + 1 - i, d - i);
        w.f[i] = u(i, i + 1) + u(d - i, d + 1 - i);
        w.h[i] = u(i + 1, i + 1) - u(i, i) - u(d - i, d - i) + u(d + 1 - i, d + 1 - i);
    }
    w.e[n] = 0.5 * (u(n + 1, n - 1) + u(n + 2, n));
    w.f[n] = 2.0 * (u(n - 1, n + 1) + u(n, n + 2));
    w.h[n] = u(n + 1, n + 1) + u(n + 2, n + 2) - u(n - 1, n - 1) - u(n, n);

    w.e[0] = 0.5 * (u(1, d - 1) + u(2, d));
    w.f[0] = 2.0 * (u(d - 1, 1) + u(d, 2));
    w.h[0] = u(1, 1) + u(2, 2) - u(d - 1, d - 1) - u(d, d);
    return w;
}

Eigen::MatrixXi affine_cartan_matrix(int n)
{
    require_rank(n);
    Eigen::MatrixXi c = 2 * Eigen::MatrixXi::Identity(n + 1, n + 1);
    auto link = [&c](int a, int b) {
        c(a, b) = -1;
        c(b, a) = -1;
    };
    for (int i = 1; i + 1 <= n - 1; ++i)
        link(i, i + 1);
    link(n - 2, n);
    // Node 0 mirrors node 1 (for n = 3 that means two neighbours).
    for (int j = 2; j <= n; ++j)
        if (c(1, j) == -1)
            link(0, j);
    return c;
}

GradingElement grading_element(int n)
{
    require_rank(n);
    const int d = 2 * n;
    const auto weyl = weyl_generators(n);

    // Unknowns d_1..d_{2n}. One row per nonzero entry (a,b) of e_i: d_a - d_b = 1,
    // then one row per antisymmetry pair d_a + d_{2n+1-a} = 0.
    std::vector<std::pair<Eigen::VectorXd, double>> rows;
    for (int i = 1; i <= n; ++i) {
        const auto &e = weyl.e[i];
        for (int a = 1; a <= d; ++a)
            for (int b = 1; b <= d; ++b)
                if (std::abs(e(a, b)) > 0.0) {
                    Eigen::VectorXd row = Eigen::VectorXd::Zero(d);
                    row(a - 1) += 1.0;
                    row(b - 1) -= 1.0;
                    rows.emplace_back(row, 1.0);
                }
    }
    for (int a = 1; a <= n; ++a) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(d);
        row(a - 1) = 1.0;
        row(d - a) = 1.0;
        rows.emplace_back(row, 0.0);
    }

    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), d);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        m.row(static_cast<Eigen::Index>(k)) = rows[k].first.transpose();
        rhs(static_cast<Eigen::Index>(k)) = rows[k].second;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    if (qr.rank() != d)
        throw Error(ErrorCode::singular_system, "grading constraints do not determine rho");
    Eigen::VectorXd sol = qr.solve(rhs);
    if ((m * sol - rhs).cwiseAbs().maxCoeff() > 1e-10)
        throw Error(ErrorCode::singular_system, "grading constraints are inconsistent");

    GradingElement g;
    g.rho_vee = SquareMatrix(d);
    g.d.resize(d);
    for (int a = 0; a < d; ++a) {
        // The solution is integral; snap away solver noise.
        const double v = std::round(sol(a));
        g.d[a] = v;
        g.rho_vee(a + 1, a + 1) = v;
    }
    return g;
}

SquareMatrix principal_component(const SquareMatrix &a, int j, const GradingElement &grading)
{
    const int dim = a.dim();
    const int h = dim - 2;
    if (j < -h || j > h)
        throw Error(ErrorCode::out_of_range, "principal degree " + std::to_string(j) + " outside [-h, h]");
    if (static_cast<int>(grading.d.size()) != dim)
        throw Error(ErrorCode::dimension_mismatch, "grading element does not match matrix");
    SquareMatrix out(dim);
    for (int r = 1; r <= dim; ++r)
        for (int c = 1; c <= dim; ++c)
            if (static_cast<int>(grading.d[r - 1] - grading.d[c - 1]) == j)
                out(r, c) = a(r, c);
    return out;
}

SquareMatrix cyclic_component(const SquareMatrix &a, int m, const GradingElement &grading)
{
    const int dim = a.dim();
    const int h = dim - 2;
    if (static_cast<int>(grading.d.size()) != dim)
        throw Error(ErrorCode::dimension_mismatch, "grading element does not match matrix");
    const int residue = ((m % h) + h) % h;
    SquareMatrix out(dim);
    for (int r = 1; r <= dim; ++r)
        for (int c = 1; c <= dim; ++c) {
            const int deg = static_cast<int>(grading.d[r - 1] - grading.d[c - 1]);
            if (((deg % h) + h) % h == residue)
                out(r, c) = a(r, c);
        }
    return out;
}

Complex coroot_coefficient_sum(const SquareMatrix &a)
{
    const int n = rank_of(a);
    Complex sum = 0.0;
    for (int i = 1; i <= n - 1; ++i)
        sum -= static_cast<double>(n - i) * a(i, i);
    return sum;
}

} // namespace dnkw
