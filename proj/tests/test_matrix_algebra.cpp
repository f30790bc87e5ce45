#include <random>
#include <set>

#include <doctest.h>

#include <dnkw/matrix_algebra.hpp>

using namespace dnkw;

namespace
{

SquareMatrix random_matrix(int dim, std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SquareMatrix a(dim);
    for (int i = 1; i <= dim; ++i)
        for (int j = 1; j <= dim; ++j)
            a(i, j) = Complex(u(rng), u(rng));
    return a;
}

SquareMatrix diag(std::initializer_list<double> d)
{
    SquareMatrix a(static_cast<int>(d.size()));
    int i = 1;
    for (double x : d)
        a(i, i) = x, ++i;
    return a;
}

// Extended Dynkin diagram of D_n^(1) written out by hand; n = 3 is the A_3^(1) square.
Eigen::MatrixXi reference_cartan(int n)
{
    std::set<std::pair<int, int>> edges;
    if (n == 3) {
        edges = {{0, 2}, {0, 3}, {1, 2}, {1, 3}};
    } else {
        edges.insert({0, 2});
        for (int i = 1; i <= n - 2; ++i)
            edges.insert({i, i + 1});
        edges.insert({n - 2, n});
    }
    Eigen::MatrixXi a = 2 * Eigen::MatrixXi::Identity(n + 1, n + 1);
    for (const auto &[i, j] : edges)
        a(i, j) = a(j, i) = -1;
    return a;
}

} // namespace

TEST_CASE("algebra config bounds")
{
    CHECK(AlgebraConfig(4).h() == 6);
    CHECK(AlgebraConfig(7).dim() == 14);
    CHECK_THROWS_AS(AlgebraConfig(2), Error);
    CHECK_THROWS_AS(AlgebraConfig(4, 0.0), Error);
    CHECK_THROWS_AS(AlgebraConfig(4, 1e-5), Error);
    try {
        AlgebraConfig(1);
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::rank_too_small);
    }
}

TEST_CASE("involution matrix")
{
    CHECK(approx_equal(build_involution_matrix(3), diag({1, -1, 1, 1, -1, 1}), 0.0));
    CHECK(approx_equal(build_involution_matrix(4), diag({1, -1, 1, -1, -1, 1, -1, 1}), 0.0));
    for (int n = 3; n <= 8; ++n) {
        const auto s = build_involution_matrix(n);
        CHECK(approx_equal(s * s, SquareMatrix::identity(2 * n), 0.0));
    }
    CHECK_THROWS_AS(build_involution_matrix(2), Error);
}

TEST_CASE("anti-transpose")
{
    CHECK(approx_equal(anti_transpose(SquareMatrix::identity(6)), SquareMatrix::identity(6), 0.0));
    CHECK(approx_equal(anti_transpose(SquareMatrix::unit(6, 1, 2)), SquareMatrix::unit(6, 5, 6), 0.0));
    std::mt19937_64 rng(11);
    const auto a = random_matrix(8, rng);
    CHECK(approx_equal(anti_transpose(anti_transpose(a)), a, 0.0));

    ColumnVector v(4);
    v << 1.0, 2.0, 3.0, 4.0;
    const Eigen::RowVectorXcd row = anti_transpose(v);
    CHECK(row(0) == Complex(4.0));
    CHECK(row(3) == Complex(1.0));
}

TEST_CASE("sigma projects into the algebra")
{
    CHECK(approx_equal(sigma(SquareMatrix::unit(6, 2, 1)), SquareMatrix::unit(6, 2, 1) + SquareMatrix::unit(6, 6, 5),
                       1e-15));
    CHECK(sigma(SquareMatrix(6)).max_norm() == 0.0);
    CHECK_FALSE(membership_check(SquareMatrix::identity(8)));

    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        const int n = 3 + k % 6;
        const auto a = sigma(random_matrix(2 * n, rng));
        CHECK(membership_check(a));
        CHECK(approx_equal(sigma(a), a * Complex(2.0), 1e-12));
    }
}

TEST_CASE("killing form")
{
    std::mt19937_64 rng(5);
    for (int k = 0; k < 100; ++k) {
        const int n = 3 + k % 4;
        const auto a = sigma(random_matrix(2 * n, rng));
        const auto b = sigma(random_matrix(2 * n, rng));
        const auto c = sigma(random_matrix(2 * n, rng));
        const double scale = a.max_norm() * b.max_norm() * c.max_norm() * 4 * n * n;
        CHECK(std::abs(killing_form(commutator(a, b), c) + killing_form(b, commutator(a, c))) <= 1e-12 * scale);
        CHECK(std::abs(killing_form(a, b) - killing_form(b, a)) <= 1e-12 * scale);
        CHECK(killing_form(a, SquareMatrix(2 * n)) == Complex(0.0));
    }
    CHECK_THROWS_AS(killing_form(SquareMatrix(6), SquareMatrix(8)), Error);
}

TEST_CASE("Weyl generators")
{
    for (int n = 3; n <= 8; ++n) {
        CAPTURE(n);
        const auto w = weyl_generators(n);
        REQUIRE(w.e.size() == static_cast<std::size_t>(n + 1));
        for (int i = 0; i <= n; ++i) {
            CHECK(membership_check(w.e[i]));
            CHECK(membership_check(w.f[i]));
            CHECK(membership_check(w.h[i]));
            CHECK(std::abs(killing_form(w.e[i], w.f[i]) - 1.0) <= 1e-12);
            for (int j = 0; j <= n; ++j) {
                const auto want = i == j ? w.h[i] : SquareMatrix(2 * n);
                CHECK(approx_equal(commutator(w.e[i], w.f[j]), want, 1e-12));
            }
        }
        CHECK(approx_equal(commutator(w.e[n], w.f[n]), w.h[n], 1e-12));

        // [h_i, e_j] = c_ij e_j against the hand-written diagram
        const auto ref = reference_cartan(n);
        CHECK(affine_cartan_matrix(n) == ref);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                CHECK(approx_equal(commutator(w.h[i], w.e[j]), w.e[j] * Complex(ref(i, j)), 1e-12));

        SquareMatrix lambda(2 * n);
        for (const auto &e : w.e)
            lambda += e;
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(lambda.eigen());
        lu.setThreshold(1e-10);
        CHECK(lu.rank() == 2 * n - 2);
    }
    CHECK_THROWS_AS(weyl_generators(2), Error);
}

TEST_CASE("grading element")
{
    const auto g4 = grading_element(4);
    CHECK(approx_equal(g4.rho_vee, diag({-3, -2, -1, 0, 0, 1, 2, 3}), 1e-12));
    for (int n = 3; n <= 8; ++n) {
        CAPTURE(n);
        const auto g = grading_element(n);
        const auto w = weyl_generators(n);
        const int h = 2 * n - 2;
        CHECK(g.rho_vee.is_diagonal(0.0));
        CHECK(std::abs(g.rho_vee.trace()) <= 1e-12);
        for (int a = 0; a < 2 * n; ++a)
            CHECK(g.d[a] == -g.d[2 * n - 1 - a]);
        for (int i = 1; i <= n; ++i) {
            CHECK(approx_equal(commutator(g.rho_vee, w.e[i]), w.e[i], 0.0));
            CHECK(approx_equal(commutator(g.rho_vee, w.f[i]), -w.f[i], 0.0));
        }
        CHECK(approx_equal(commutator(g.rho_vee, w.e[0]), w.e[0] * Complex(1.0 - h), 0.0));
    }
}

TEST_CASE("principal components")
{
    const int n = 4, h = 6;
    const auto g = grading_element(n);
    const auto w = weyl_generators(n);
    CHECK(approx_equal(principal_component(w.e[1], 1, g), w.e[1], 0.0));
    CHECK_THROWS_AS(principal_component(w.e[1], h + 1, g), Error);

    std::mt19937_64 rng(17);
    const auto a = sigma(random_matrix(2 * n, rng));
    SquareMatrix total(2 * n);
    for (int j = -h; j <= h; ++j) {
        const auto c = principal_component(a, j, g);
        CHECK(approx_equal(principal_component(c, j, g), c, 0.0));
        total += c;
        for (int k = -h; k <= h; ++k)
            if (j + k != 0)
                CHECK(std::abs(killing_form(c, principal_component(a, k, g))) <= 1e-14);
    }
    CHECK(approx_equal(total, a, 0.0));

    // residue 0 keeps the diagonal, the (4,5)/(5,4) pair where d vanishes, and the (1,2n)/(2n,1) corners
    const auto c0 = cyclic_component(random_matrix(2 * n, rng), 0, g);
    for (int i = 1; i <= 2 * n; ++i)
        for (int j = 1; j <= 2 * n; ++j) {
            const bool corner = (i == 1 && j == 2 * n) || (i == 2 * n && j == 1);
            const bool kept = i == j || (i + j == 2 * n + 1 && (i == n || i == n + 1)) || corner;
            CHECK((c0(i, j) != Complex(0.0)) == kept);
        }

    for (int i = 0; i <= n; ++i) {
        CHECK(approx_equal(cyclic_component(w.e[i], 1, g), w.e[i], 0.0));
        CHECK(approx_equal(cyclic_component(w.f[i], -1, g), w.f[i], 0.0));
    }
}

TEST_CASE("coroot coefficient sum")
{
    const auto w = weyl_generators(4);
    CHECK(std::abs(coroot_coefficient_sum(w.h[1]) - 1.0) <= 1e-14);
    CHECK(coroot_coefficient_sum(w.e[2]) == Complex(0.0));
    CHECK(std::abs(coroot_coefficient_sum(grading_element(4).rho_vee) - 14.0) <= 1e-12);
}
