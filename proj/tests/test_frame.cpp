#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "coneflow/frame.hpp"

using namespace coneflow;

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::mt19937 rng(20240817u);

TwoParamJet<double> random_jet(bool with_second = true) {
  std::uniform_real_distribution<double> scale(0.2, 3.0);
  std::uniform_real_distribution<double> rate(-2.0, 2.0);
  TwoParamJet<double> j;
  j.a1 = scale(rng);
  j.a2 = scale(rng);
  j.da1 = rate(rng);
  j.da2 = rate(rng);
  if (with_second) {
    j.dda1 = rate(rng);
    j.dda2 = rate(rng);
  }
  return j;
}

}  // namespace

TEST_CASE("connection form matches the round-sphere matrix") {
  for (double tau : {0.5, 1.0, 2.0, 3.7}) {
    const auto w = connection_form(TwoParamJet<double>::conformal(tau, 1.0));
    CHECK(near(w.coefficient(0, 1, 1), 1.0 / tau, 1e-15));
    CHECK(near(w.coefficient(0, 2, 2), 1.0 / tau, 1e-15));
    CHECK(near(w.coefficient(0, 3, 3), 1.0 / tau, 1e-15));
    CHECK(near(w.coefficient(2, 3, 1), 1.0 / tau, 1e-15));
  }
}

TEST_CASE("connection form of the cylinder over the unit sphere") {
  const auto w = connection_form(TwoParamJet<double>::conformal(1.0, 0.0));
  CHECK(w.coefficient(0, 1, 1) == 0.0);
  CHECK(w.coefficient(0, 2, 2) == 0.0);
  CHECK(w.coefficient(0, 3, 3) == 0.0);
  CHECK(w.coefficient(1, 2, 3) == -1.0);
  CHECK(w.coefficient(1, 3, 2) == 1.0);
  CHECK(w.coefficient(2, 3, 1) == 1.0);
}

TEST_CASE("connection form by direct substitution") {
  const auto w = connection_form(TwoParamJet<double>{1.0, 2.0, 3.0, 5.0, {}, {}});
  CHECK(near(w.coefficient(0, 1, 1), 3.0, 1e-15));
  CHECK(near(w.coefficient(0, 2, 2), 2.5, 1e-15));
  CHECK(near(w.coefficient(0, 3, 3), 2.5, 1e-15));
  CHECK(near(w.coefficient(1, 2, 3), -0.25, 1e-15));
  CHECK(near(w.coefficient(1, 3, 2), 0.25, 1e-15));
  CHECK(near(w.coefficient(2, 3, 1), 7.0 / 4.0, 1e-15));
}

TEST_CASE("connection form is skew symmetric") {
  for (int trial = 0; trial < 200; ++trial) {
    const auto jet = random_jet(false);
    const auto w = connection_form(jet);
    for (const auto& e : w.entries) {
      CHECK(w.coefficient(e.j, e.i, e.k) == -e.c);
    }
    // absent slots read as zero under either index order
    CHECK(w.coefficient(0, 1, 2) == 0.0);
    CHECK(w.coefficient(1, 0, 2) == 0.0);
  }
}

TEST_CASE("connection form domain errors") {
  CHECK_THROWS_AS((void)connection_form(TwoParamJet<double>{0.0, 1.0, 1.0, 1.0, {}, {}}),
                  std::domain_error);
  CHECK_THROWS_AS((void)connection_form(TwoParamJet<double>{1.0, 0.0, 1.0, 1.0, {}, {}}),
                  std::domain_error);
  CHECK_THROWS_AS((void)connection_form(TwoParamJet<double>{1.0, -2.0, 1.0, 1.0, {}, {}}),
                  std::domain_error);
}

TEST_CASE("flat cone curvature vanishes") {
  for (double t : {0.3, 1.0, 2.4, 5.0}) {
    const auto omega = curvature_blocks(TwoParamJet<double>::conformal(t, 1.0, 0.0));
    for (const auto& b : omega.blocks)
      for (const auto& term : b.terms) CHECK(near(term.c, 0.0, 1e-12));
  }
}

TEST_CASE("restricted curvature block of the round sphere") {
  for (double tau : {0.5, 1.0, 2.0}) {
    const auto bar = restricted_curvature_blocks(tau, tau);
    CHECK(near(bar.c12, 1.0 / (tau * tau), 1e-14));
    CHECK(near(bar.c13, 1.0 / (tau * tau), 1e-14));
  }
}

TEST_CASE("curvature blocks of the unit cylinder") {
  const auto omega = curvature_blocks(TwoParamJet<double>::conformal(1.0, 0.0, 0.0));
  CHECK(near(omega.sectional(2, 3), 1.0, 1e-15));  // 4 - 3 - 0
  CHECK(near(omega.sectional(1, 2), 1.0, 1e-15));
}

TEST_CASE("curvature blocks demand second derivatives and positive scales") {
  CHECK_THROWS_AS((void)curvature_blocks(TwoParamJet<double>{1.0, 1.0, 0.0, 0.0, {}, {}}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)curvature_blocks(TwoParamJet<double>{0.0, 1.0, 0.0, 0.0, 0.0, 0.0}),
                  std::domain_error);
}

namespace {

// The 2<->3 swap is induced by the isometry (e^1, e^2, e^3) -> (-e^1, e^3, e^2)
// of the coframe, so a term picks up one sign per index equal to 1 plus the
// reordering signs.
struct CanonTerm {
  int i, j, k, l;
  double c;
};

CanonTerm swap23(int i, int j, int k, int l, double c) {
  const auto map = [](int idx) { return idx == 2 ? 3 : (idx == 3 ? 2 : idx); };
  const auto flips = [](int idx) { return idx == 1 ? -1.0 : 1.0; };
  double sign = flips(i) * flips(j) * flips(k) * flips(l);
  int I = map(i), J = map(j), K = map(k), L = map(l);
  if (I > J) {
    std::swap(I, J);
    sign = -sign;
  }
  if (K > L) {
    std::swap(K, L);
    sign = -sign;
  }
  return {I, J, K, L, sign * c};
}

}  // namespace

TEST_CASE("curvature blocks respect the 2<->3 symmetry of the ansatz") {
  for (int trial = 0; trial < 1000; ++trial) {
    const auto jet = random_jet();
    const auto omega = curvature_blocks(jet);
    for (const auto& b : omega.blocks) {
      for (const auto& term : b.terms) {
        const CanonTerm mapped = swap23(b.i, b.j, term.k, term.l, term.c);
        double found = 0.0;
        for (const auto& t2 : omega.block(mapped.i, mapped.j).terms)
          if (t2.k == mapped.k && t2.l == mapped.l) found = t2.c;
        CHECK(near(found, mapped.c, 1e-15 * (1.0 + std::abs(mapped.c))));
      }
    }
  }
}

TEST_CASE("restricted Ricci reproduces the printed values") {
  for (double tau : {0.5, 1.0, 2.0, 4.0}) {
    const auto ric = ricci_bar(tau, tau);
    CHECK(near(ric.ric11, 4.0 / (tau * tau), 1e-14));
    CHECK(near(ric.ric22, 4.0 / (tau * tau), 1e-14));
    CHECK(near(ric.ric33, 4.0 / (tau * tau), 1e-14));
    CHECK_FALSE(ric.is_ambient);
  }
  const auto bolt = ricci_bar(0.0, std::sqrt(5.0));
  CHECK(bolt.ric11 == 0.0);
  CHECK(near(bolt.ric22, 8.0 / 5.0, 1e-14));
  const auto generic = ricci_bar(1.0, 2.0);
  CHECK(near(generic.ric11, 0.25, 1e-15));
  CHECK(near(generic.ric22, 1.75, 1e-15));
  CHECK(near(generic.scalar, 0.25 + 2.0 * 1.75, 1e-14));
  CHECK_THROWS_AS((void)ricci_bar(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)ricci_bar(-0.5, 1.0), std::domain_error);
}

TEST_CASE("restricted Ricci agrees with the tangential curvature blocks") {
  std::uniform_real_distribution<double> scale(0.2, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a1 = scale(rng), a2 = scale(rng);
    const auto bar = restricted_curvature_blocks(a1, a2);
    const auto ric = ricci_bar(a1, a2);
    const double f = FrameConvention::curvature_factor;
    CHECK(near(ric.ric11, f * (bar.c12 + bar.c13), 1e-12 * (1.0 + std::abs(ric.ric11))));
    CHECK(near(ric.ric22, f * (bar.c12 + bar.c23), 1e-12 * (1.0 + std::abs(ric.ric22))));
  }
}

TEST_CASE("restricted Ricci scale law") {
  std::uniform_real_distribution<double> scale(0.2, 3.0);
  std::uniform_real_distribution<double> lam(0.5, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double a1 = scale(rng), a2 = scale(rng), l = lam(rng);
    const auto base = ricci_bar(a1, a2);
    const auto scaled = ricci_bar(l * a1, l * a2);
    CHECK(near(l * l * scaled.ric11, base.ric11, 1e-12 * (1.0 + std::abs(base.ric11))));
    CHECK(near(l * l * scaled.ric22, base.ric22, 1e-12 * (1.0 + std::abs(base.ric22))));
  }
}

TEST_CASE("ambient Ricci of constant-curvature profiles") {
  // f = t sweeps flat space
  const auto flat = ricci_ambient(TwoParamJet<double>::conformal(1.7, 1.0, 0.0));
  CHECK(near(flat.ric00, 0.0, 1e-14));
  CHECK(near(flat.ric11, 0.0, 1e-14));
  CHECK(near(flat.scalar, 0.0, 1e-14));

  // f = sin t sweeps the unit round 4-sphere: Ric = 6 id, scalar 24
  for (double t : {0.4, 1.0, 2.0}) {
    const auto jet = TwoParamJet<double>::conformal(std::sin(t), std::cos(t), -std::sin(t));
    const auto ric = ricci_ambient(jet);
    CHECK(near(ric.ric00, 6.0, 1e-12));
    CHECK(near(ric.ric11, 6.0, 1e-12));
    CHECK(near(ric.ric22, 6.0, 1e-12));
    CHECK(near(ric.ric33, 6.0, 1e-12));
    CHECK(near(ric.scalar, 24.0, 1e-11));
    CHECK(ric.is_ambient);
  }
}

TEST_CASE("ambient Ricci matches the explicit two-parameter formulas") {
  for (int trial = 0; trial < 300; ++trial) {
    const auto j = random_jet();
    const auto ric = ricci_ambient(j);
    const double a1 = j.a1, a2 = j.a2, da1 = j.da1, da2 = j.da2;
    const double dda1 = *j.dda1, dda2 = *j.dda2;
    const double r00 = 2.0 * (-dda1 / a1 - 2.0 * dda2 / a2);
    const double r11 = -2.0 * dda1 / a1 +
                       4.0 * (a1 * a1 / std::pow(a2, 4) - da1 * da2 / (a1 * a2));
    const double r22 = 2.0 * (-dda2 / a2 + a1 * a1 / std::pow(a2, 4) -
                              da1 * da2 / (a1 * a2) + 4.0 / (a2 * a2) -
                              3.0 * a1 * a1 / std::pow(a2, 4) - da2 * da2 / (a2 * a2));
    const double tol = 1e-11 * (1.0 + std::abs(r00) + std::abs(r11) + std::abs(r22));
    CHECK(near(ric.ric00, r00, tol));
    CHECK(near(ric.ric11, r11, tol));
    CHECK(near(ric.ric22, r22, tol));
    CHECK(near(ric.ric33, r22, tol));
  }
}

TEST_CASE("conformal jets take the one-parameter route and agree with block assembly") {
  std::uniform_real_distribution<double> scale(0.3, 3.0);
  std::uniform_real_distribution<double> rate(-2.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double f = scale(rng), df = rate(rng), ddf = rate(rng);
    const auto jet = TwoParamJet<double>::conformal(f, df, ddf);
    const auto one = ricci_ambient(jet);
    const auto omega = curvature_blocks(jet);
    const double k = FrameConvention::curvature_factor;
    const double r00 = k * (omega.sectional(0, 1) + omega.sectional(0, 2) + omega.sectional(0, 3));
    const double r11 = k * (omega.sectional(0, 1) + omega.sectional(1, 2) + omega.sectional(1, 3));
    const double r22 = k * (omega.sectional(0, 2) + omega.sectional(1, 2) + omega.sectional(2, 3));
    const double tol = 1e-12 * (1.0 + std::abs(one.ric00) + std::abs(one.ric11));
    CHECK(near(one.ric00, r00, tol));
    CHECK(near(one.ric11, r11, tol));
    CHECK(near(one.ric22, r22, tol));
  }
}

TEST_CASE("second fundamental form of the expanding round sphere") {
  CHECK(second_fundamental_round(1.0).b_orthonormal == -1.0);
  CHECK(second_fundamental_round(2.0).b_orthonormal == -0.5);
  const auto b3 = second_fundamental_round(3.0);
  CHECK(b3.b_e_basis == -3.0);
  CHECK(b3.gbar_rate_e_basis == 6.0);
  CHECK(b3.gbar_rate_e_basis == -2.0 * b3.b_e_basis);
  CHECK_THROWS_AS((void)second_fundamental_round(0.0), std::domain_error);
  CHECK_THROWS_AS((void)second_fundamental_round(-1.0), std::domain_error);
}

TEST_CASE("anti-self-duality residual") {
  // flat profile
  for (double t : {0.5, 1.0, 3.0}) {
    const auto r = asd_residual(TwoParamJet<double>::conformal(t, 1.0));
    CHECK(near(r.rho1, 0.0, 1e-15));
    CHECK(near(r.rho2, 0.0, 1e-15));
  }
  // conformal profile f = sin t at t = pi/3: both residuals (cos - 1)/sin
  const double t = std::numbers::pi / 3.0;
  const auto r = asd_residual(TwoParamJet<double>::conformal(std::sin(t), std::cos(t)));
  CHECK(near(r.rho1, -0.57735026918962573, 1e-14));
  CHECK(near(r.rho2, -0.57735026918962573, 1e-14));
  CHECK_THROWS_AS((void)asd_residual(TwoParamJet<double>{0.0, 1.0, 1.0, 1.0, {}, {}}),
                  std::domain_error);
}

TEST_CASE("conformal ASD residual equals (f' - 1)/f") {
  std::uniform_real_distribution<double> scale(0.3, 3.0);
  std::uniform_real_distribution<double> rate(-2.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double f = scale(rng), df = rate(rng);
    const auto r = asd_residual(TwoParamJet<double>::conformal(f, df));
    const double expected = (df - 1.0) / f;
    CHECK(near(r.rho1, expected, 1e-13 * (1.0 + std::abs(expected))));
    CHECK(near(r.rho2, expected, 1e-13 * (1.0 + std::abs(expected))));
    if (df == 1.0) CHECK(r.rho1 == 0.0);
  }
}

TEST_CASE("contact pairings") {
  CHECK(near(contact_pairing(1, 2.0, 1.0), 4.0, 1e-15));
  CHECK(near(contact_pairing(2, 2.0, 1.0), 1.0, 1e-15));
  CHECK(near(contact_pairing(3, 2.0, 1.0), 1.0, 1e-15));
  for (double tau : {0.5, 1.0, 2.0}) {
    CHECK(near(contact_pairing(1, tau, tau), 2.0 / tau, 1e-15));
    CHECK(contact_pairing(1, tau, tau) == contact_pairing(2, tau, tau));
  }
  CHECK_THROWS_AS((void)contact_pairing(1, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)contact_pairing(0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("Hodge / d-bar pairs") {
  TwoParamJet<double> jet{3.0, 1.0, 0.7, -0.4, {}, {}};
  CHECK(hodge_dbar_pair(1, jet).second == 6.0);
  jet = TwoParamJet<double>{1.0, 5.0, 0.7, -0.4, {}, {}};
  CHECK(hodge_dbar_pair(2, jet).second == 10.0);
  CHECK(hodge_dbar_pair(3, jet).second == 10.0);

  // on-shell jets (rates from the anti-self-duality system) saturate the
  // contact-flow constraint: the Hodge rate equals the d-bar coefficient
  std::uniform_real_distribution<double> scale(0.3, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a1 = scale(rng), a2 = scale(rng);
    TwoParamJet<double> on{a1, a2, 2.0 - a1 * a1 / (a2 * a2), a1 / a2, {}, {}};
    const auto p1 = hodge_dbar_pair(1, on);
    const auto p2 = hodge_dbar_pair(2, on);
    CHECK(near(p1.first, p1.second, 1e-13 * (1.0 + std::abs(p1.second))));
    CHECK(near(p2.first, p2.second, 1e-13 * (1.0 + std::abs(p2.second))));
  }
}

TEST_CASE("frame formulas instantiate for other scalars") {
  const auto ric = ricci_bar<long double>(1.0L, 2.0L);
  CHECK(near(static_cast<double>(ric.ric11), 0.25, 1e-18));
  const auto w = connection_form(TwoParamJet<long double>{1.0L, 2.0L, 3.0L, 5.0L, {}, {}});
  CHECK(static_cast<double>(w.coefficient(2, 3, 1)) == 1.75);
}
