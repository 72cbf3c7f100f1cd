#include <doctest.h>

#include <cmath>

#include "mstab/errors.hpp"
#include "mstab/maslov.hpp"
#include "mstab/quadrature.hpp"
#include "mstab/wave.hpp"

using namespace mstab;

TEST_CASE("s-direction crossing form at conjugate points") {
    SUBCASE("T2: m_s = ell (v'(ell))^2 = 8 pi^2, signature +1") {
        const auto p = family_T2();
        const auto c = make_crossing(p, 0.0, 1.0);
        REQUIRE(c.kernel_dim == 1);
        CHECK(c.which_kernel == KernelSide::Lminus);
        const auto f = crossing_form_s(c, p);
        CHECK(f.mat(0, 0) == doctest::Approx(8 * M_PI * M_PI).epsilon(1e-8));
        CHECK(f.signature() == 1);
    }
    SUBCASE("T1: diag(-18 pi^2, 8 pi^2), signature 0") {
        const auto p = family_T1();
        const auto c = make_crossing(p, 0.0, 1.0);
        REQUIRE(c.kernel_dim == 2);
        const auto f = crossing_form_s(c, p);
        CHECK(f.mat(0, 0) == doctest::Approx(-18 * M_PI * M_PI).epsilon(1e-8));
        CHECK(f.mat(1, 1) == doctest::Approx(8 * M_PI * M_PI).epsilon(1e-8));
        CHECK(std::fabs(f.mat(0, 1)) < 1e-12);
        CHECK(f.signature() == 0);
    }
    SUBCASE("conjugate point of L+ along a wave: signature -1") {
        const auto w = dnoidal_wave(-2.0, 0.5, 6, 512);
        const auto p = linearized_potentials(w);
        const auto pts = conjugate_points(p.g, p.ell, 0.0, 1.0 - 1e-8);
        REQUIRE(!pts.empty());
        const auto c = make_crossing(p, 0.0, pts[0], 1024);
        REQUIRE(c.kernel_dim == 1);
        CHECK(c.which_kernel == KernelSide::Lplus);
        CHECK(crossing_form_s(c, p).signature() == -1);
    }
    SUBCASE("empty kernel is rejected") {
        const auto p = family_T3();
        const auto c = make_crossing(p, 0.0, 0.5);
        CHECK(c.kernel_dim == 0);
        CHECK_THROWS_AS(crossing_form_s(c, p), NotACrossing);
    }
}

TEST_CASE("lambda-direction crossing form") {
    SUBCASE("simple conjugate point: exactly zero") {
        const auto p = family_T2();
        const auto c = make_crossing(p, 0.0, 1.0);
        const auto f = crossing_form_lambda(c);
        CHECK(f.mat(0, 0) == 0.0);
        CHECK(f.signature() == 0);
    }
    SUBCASE("T3 coupled crossing: positive sign") {
        const auto p = family_T3();
        const auto cr = real_eigenvalues(p, 1.0, 1.0, 50.0);
        REQUIRE(cr.size() == 1);
        const auto f = crossing_form_lambda(cr[0]);
        CHECK(f.signature() == 1);
        // -2 <u, v> = sqrt2 * 2/3 for the (1, -sqrt2)/norm kernel
        CHECK(f.mat(0, 0) ==
              doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-7));
    }
    SUBCASE("T1 double kernel: zero matrix (orthogonal modes)") {
        const auto p = family_T1();
        const auto c = make_crossing(p, 0.0, 1.0);
        const auto f = crossing_form_lambda(c);
        CHECK(f.mat.cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("inhomogeneous Dirichlet solves") {
    const int n = 2048;
    const double ell = 1.0;
    auto sample = [&](double (*f)(double)) {
        std::vector<double> v(n + 1);
        for (int i = 0; i <= n; ++i) v[i] = f(ell * i / n);
        return v;
    };
    SUBCASE("L+ uhat = sin 2 pi x with q = 2 pi^2") {
        auto q = [](double) { return 2 * M_PI * M_PI; };
        const auto rhs = sample(+[](double x) { return std::sin(2 * M_PI * x); });
        const auto w = solve_inhomogeneous(q, SignConvention::Lplus_eq, rhs, ell);
        for (int i = 0; i <= n; i += 128)
            CHECK(std::fabs(w[i] - std::sin(2 * M_PI * i / double(n)) /
                                       (2 * M_PI * M_PI)) < 1e-9);
    }
    SUBCASE("-L- vhat = sin 3 pi x with q = 4 pi^2") {
        auto q = [](double) { return 4 * M_PI * M_PI; };
        const auto rhs = sample(+[](double x) { return std::sin(3 * M_PI * x); });
        const auto w =
            solve_inhomogeneous(q, SignConvention::minus_Lminus_eq, rhs, ell);
        for (int i = 0; i <= n; i += 128)
            CHECK(std::fabs(w[i] + std::sin(3 * M_PI * i / double(n)) /
                                       (5 * M_PI * M_PI)) < 1e-9);
    }
    SUBCASE("Fredholm violation with a kernel present") {
        auto q = [](double) { return M_PI * M_PI; }; // kernel sin(pi x)
        const auto rhs = sample(+[](double x) { return std::sin(M_PI * x); });
        CHECK_THROWS_AS(solve_inhomogeneous(q, SignConvention::Lplus_eq, rhs, ell),
                        FredholmViolation);
    }
    SUBCASE("orthogonal rhs with kernel: solution orthogonal to the kernel") {
        auto q = [](double) { return M_PI * M_PI; };
        const auto rhs = sample(+[](double x) { return std::sin(2 * M_PI * x); });
        const auto w = solve_inhomogeneous(q, SignConvention::Lplus_eq, rhs, ell);
        const auto ker = sample(+[](double x) { return std::sin(M_PI * x); });
        CHECK(std::fabs(simpson_product(w, ker, ell / n)) < 1e-9);
        // L+ w = rhs with L+ = -dxx - pi^2: w = sin(2 pi x)/(3 pi^2)
        for (int i = 0; i <= n; i += 128)
            CHECK(std::fabs(w[i] - std::sin(2 * M_PI * i / double(n)) /
                                       (3 * M_PI * M_PI)) < 1e-9);
    }
}

TEST_CASE("second-order lambda form") {
    SUBCASE("T2: value -1/pi^2, one negative square") {
        const auto p = family_T2();
        const auto c = make_crossing(p, 0.0, 1.0);
        const auto so = second_order_form(c, p);
        CHECK(so.form.mat(0, 0) ==
              doctest::Approx(-1.0 / (M_PI * M_PI)).epsilon(1e-8));
        CHECK(so.form.n_minus == 1);
        CHECK(!so.degenerate);
    }
    SUBCASE("T1: both diagonal entries positive, no negative squares") {
        const auto p = family_T1();
        const auto c = make_crossing(p, 0.0, 1.0);
        const auto so = second_order_form(c, p);
        CHECK(so.form.mat(0, 0) ==
              doctest::Approx(2.0 / (5 * M_PI * M_PI)).epsilon(1e-8));
        CHECK(so.form.mat(1, 1) ==
              doctest::Approx(2.0 / (5 * M_PI * M_PI)).epsilon(1e-8));
        CHECK(so.form.n_minus == 0);
    }
    SUBCASE("nonzero first-order form is rejected") {
        const auto p = family_T3();
        const auto cr = real_eigenvalues(p, 1.0, 1.0, 50.0);
        REQUIRE(cr.size() == 1);
        CHECK_THROWS_AS(second_order_form(cr[0], p), PreconditionError);
    }
    SUBCASE("L- kernel with strictly positive L+: negative form, concave up") {
        const auto p = constant_pair(0.5 * M_PI * M_PI, 4 * M_PI * M_PI, 1.0);
        const auto c = make_crossing(p, 0.0, 1.0);
        REQUIRE(c.which_kernel == KernelSide::Lminus);
        const auto so = second_order_form(c, p);
        CHECK(so.form.mat(0, 0) < 0);
        CHECK(so.form.n_minus == 1);
        CHECK(concavity(c, p).sddot[0] > 0);
    }
}

TEST_CASE("positive real roots meet the Maslov lower bound") {
    // with Q = 0 the index is monotone and the bound is attained exactly
    const auto w = dnoidal_wave(-2.0, 0.5, 6, 512);
    const auto p = linearized_potentials(w);
    const auto box = maslov_box(p);
    CHECK(box.Q == 0);
    CHECK(box.lower_bound == box.P);
    const auto roots =
        real_eigenvalues(p, 1.0, 1e-3 * p.sup_norm(), 1.1 * p.sup_norm() + 1.0);
    CHECK(static_cast<int>(roots.size()) == box.lower_bound);
}

TEST_CASE("concavity of the eigenvalue curves") {
    SUBCASE("T2: sddot = 1/(8 pi^4)") {
        const auto p = family_T2();
        const auto c = make_crossing(p, 0.0, 1.0);
        const auto r = concavity(c, p);
        REQUIRE(r.sddot.size() == 1);
        CHECK(r.sddot[0] ==
              doctest::Approx(1.0 / (8 * std::pow(M_PI, 4))).epsilon(1e-7));
        CHECK(r.s_sharp[0] == 1);
        CHECK(!r.degenerate);
    }
    SUBCASE("T1: opposite concavities 1/(45 pi^4), -1/(20 pi^4)") {
        const auto p = family_T1();
        const auto c = make_crossing(p, 0.0, 1.0);
        const auto r = concavity(c, p);
        REQUIRE(r.sddot.size() == 2);
        CHECK(r.sddot[0] ==
              doctest::Approx(1.0 / (45 * std::pow(M_PI, 4))).epsilon(1e-7));
        CHECK(r.sddot[1] ==
              doctest::Approx(-1.0 / (20 * std::pow(M_PI, 4))).epsilon(1e-7));
        CHECK(r.s_sharp[0] == 1);
        CHECK(r.s_sharp[1] == -1);
    }
    SUBCASE("Neumann nonvanishing wave: concave up") {
        const auto w = dnoidal_wave(-2.0, 0.5, 6, 512);
        const auto p = linearized_potentials(w);
        const auto c = make_crossing(p, 0.0, 1.0, 1024);
        REQUIRE(c.kernel_dim == 1);
        REQUIRE(c.which_kernel == KernelSide::Lplus);
        const auto r = concavity(c, p);
        CHECK(r.sddot[0] > 0);
    }
    SUBCASE("identical operators: isolated crossing") {
        const auto p = constant_pair(4 * M_PI * M_PI, 4 * M_PI * M_PI, 1.0);
        const auto c = make_crossing(p, 0.0, 1.0);
        REQUIRE(c.kernel_dim == 2);
        const auto r = concavity(c, p);
        CHECK(r.isolated);
    }
}

TEST_CASE("concavity matches the traced curve curvature") {
    // finite-difference curvature of s(lambda) through (0,1) via s-roots of
    // det X at small lambda; Richardson-combined central second difference
    auto curvature = [](const PotentialPair& p, double delta, bool upper) {
        auto s_at = [&](double lambda) {
            double lo = upper ? 1.0 : 0.96, hi = upper ? 1.04 : 1.0;
            // bracket the root in s
            const int m = 200;
            double prev = char_det(p, lambda, lo);
            for (int i = 1; i <= m; ++i) {
                const double s = lo + (hi - lo) * i / m;
                const double cur = char_det(p, lambda, s);
                if (std::signbit(prev) != std::signbit(cur)) {
                    double a = lo + (hi - lo) * (i - 1) / m, b = s, fa = prev;
                    for (int it = 0; it < 60; ++it) {
                        const double mid = 0.5 * (a + b);
                        const double fm = char_det(p, lambda, mid);
                        if (std::signbit(fm) == std::signbit(fa)) a = mid, fa = fm;
                        else b = mid;
                    }
                    return 0.5 * (a + b);
                }
                prev = cur;
            }
            return 1.0; // tangency point itself
        };
        const double s2 = (s_at(delta) - 2.0 + s_at(-delta)) / (delta * delta);
        const double s2h =
            (s_at(delta / 2) - 2.0 + s_at(-delta / 2)) / (delta * delta / 4);
        return (4.0 * s2h - s2) / 3.0;
    };

    SUBCASE("T2 upper parabola") {
        const auto p = family_T2();
        const double fd = curvature(p, 0.4, true);
        CHECK(std::fabs(fd - 1.0 / (8 * std::pow(M_PI, 4))) <
              1e-3 * (1.0 / (8 * std::pow(M_PI, 4))));
    }
    SUBCASE("T1 both parabolas") {
        const auto p = family_T1();
        const double fd_up = curvature(p, 0.4, true);
        const double fd_dn = curvature(p, 0.4, false);
        CHECK(std::fabs(fd_up - 1.0 / (45 * std::pow(M_PI, 4))) <
              1e-3 / (45 * std::pow(M_PI, 4)));
        CHECK(std::fabs(fd_dn + 1.0 / (20 * std::pow(M_PI, 4))) <
              1e-3 / (20 * std::pow(M_PI, 4)));
    }
}

TEST_CASE("corner term decision table") {
    SUBCASE("no kernel at s = 1: c = 0") {
        const auto ct = correction_term(std::nullopt, std::nullopt);
        CHECK(ct.c == 0);
        CHECK(ct.resolved);
    }
    SUBCASE("T2: simple L- kernel with s-sharp > 0: c = 0") {
        const auto p = family_T2();
        const auto c = make_crossing(p, 0.0, 1.0);
        const auto ct = correction_term(c, concavity(c, p));
        CHECK(ct.c == 0);
    }
    SUBCASE("T1: double orthogonal with opposite departure: c = 1") {
        const auto p = family_T1();
        const auto c = make_crossing(p, 0.0, 1.0);
        const auto ct = correction_term(c, concavity(c, p));
        CHECK(ct.c == 1);
    }
    SUBCASE("identical operators: c = 0") {
        const auto p = constant_pair(4 * M_PI * M_PI, 4 * M_PI * M_PI, 1.0);
        const auto c = make_crossing(p, 0.0, 1.0);
        const auto ct = correction_term(c, concavity(c, p));
        CHECK(ct.c == 0);
    }
}

TEST_CASE("Maslov box bookkeeping") {
    SUBCASE("T3: P=1 Q=0 c=0 bound 1, one positive real root") {
        const auto p = family_T3();
        const auto box = maslov_box(p);
        CHECK(box.P == 1);
        CHECK(box.Q == 0);
        CHECK(box.corner_c == 0);
        CHECK(box.gamma2_index == -1);
        CHECK(box.gamma3_index == 1);
        CHECK(box.lower_bound == 1);
        CHECK(box.gamma2_index + box.corner_c + box.gamma3_index == 0);
        const auto roots = real_eigenvalues(p, 1.0, 0.05, 50.0);
        CHECK(static_cast<int>(roots.size()) >= box.lower_bound);
    }
    SUBCASE("T1: P=2 Q=1 c=1 bound 0") {
        const auto p = family_T1();
        const auto box = maslov_box(p);
        CHECK(box.P == 2);
        CHECK(box.Q == 1);
        CHECK(box.corner_c == 1);
        CHECK(box.lower_bound == 0);
        CHECK(box.second_order_consistent);
        // signature dictionary: conjugate points of L+ carry -1, of L- +1
        for (const auto& [s0, sig] : box.gamma2_signatures)
            CHECK((sig == -1 || sig == 1));
    }
    SUBCASE("T2: P=1 Q=1 c=0 bound 0") {
        const auto p = family_T2();
        const auto box = maslov_box(p);
        CHECK(box.P == 1);
        CHECK(box.Q == 1);
        CHECK(box.corner_c == 0);
        CHECK(box.lower_bound == 0);
        CHECK(box.second_order_consistent);
    }
    SUBCASE("free potentials: everything zero") {
        const auto p = free_pair(1.0);
        const auto box = maslov_box(p);
        CHECK(box.P == 0);
        CHECK(box.Q == 0);
        CHECK(box.corner_c == 0);
        CHECK(box.lower_bound == 0);
        CHECK(box.gamma2_signatures.empty());
    }
}

TEST_CASE("Hadamard slope agreement at regular crossings") {
    // lambda'(s) = -m_s / m_lambda along a curve of coupled crossings
    const auto p = family_T3();
    const double s0 = 0.95;
    auto root_at = [&](double s) {
        const auto cr = real_eigenvalues(p, s, 1.0, 60.0);
        REQUIRE(cr.size() == 1);
        return cr[0];
    };
    const auto c = root_at(s0);
    const auto ms = crossing_form_s(c, p);
    const auto ml = crossing_form_lambda(c);
    const double predicted = -ms.mat(0, 0) / ml.mat(0, 0);
    const double ds = 2e-3;
    const double fd1 =
        (root_at(s0 + ds).lambda0 - root_at(s0 - ds).lambda0) / (2 * ds);
    const double fd2 =
        (root_at(s0 + ds / 2).lambda0 - root_at(s0 - ds / 2).lambda0) / ds;
    const double fd = (4 * fd2 - fd1) / 3;
    CHECK(std::fabs(fd - predicted) < 1e-4 * std::fabs(predicted));
}
