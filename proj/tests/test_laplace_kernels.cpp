#include <doctest.h>

#include <cmath>

#include "krein/errors.hpp"
#include "krein/free_resolvent.hpp"
#include "krein/laplace_kernels.hpp"
#include "krein/point_interactions.hpp"
#include "support.hpp"

using namespace krein;
using krein::testing::engine;
using krein::testing::rel;
using krein::testing::uniform;

TEST_SUITE("sqrt_upper") {
  TEST_CASE("negative axis and a perfect square") {
    CHECK(std::abs(sqrt_upper(-9.0) - cplx(0.0, 3.0)) < 1e-15);
    CHECK(std::abs(sqrt_upper(cplx(3.0, 4.0)) - cplx(2.0, 1.0)) < 1e-15);
  }

  TEST_CASE("just below the cut") {
    const cplx z(-4.0, -0.001);
    const cplx w = sqrt_upper(z);
    CHECK(w.imag() > 0.0);
    CHECK(std::abs(w * w - z) < 1e-14 * (1.0 + std::abs(z)));
  }

  TEST_CASE("positive axis is the upper-edge limit") {
    const cplx w = sqrt_upper(4.0);
    CHECK(w.real() == 2.0);
    CHECK(w.imag() == 0.0);
    CHECK(!std::signbit(w.imag()));
    CHECK(sqrt_upper(cplx(4.0, -0.0)).real() == 2.0);
  }

  TEST_CASE("branch property over an annulus") {
    auto rng = engine(20);
    for (int i = 0; i < 10000; ++i) {
      const double r = uniform(rng, 0.1, 100.0);
      const double t = uniform(rng, -kPi, kPi);
      const cplx z = std::polar(r, t);
      const cplx w = sqrt_upper(z);
      CHECK(std::abs(w * w - z) <= 1e-14 * std::abs(z));
      if (!(z.imag() == 0.0 && z.real() >= 0.0)) CHECK(w.imag() > 0.0);
    }
  }

  TEST_CASE("energy from kappa is exact") {
    const Energy e = Energy::from_kappa(1.5);
    CHECK(e.z() == cplx(-2.25, 0.0));
    CHECK(e.sqrt_z() == cplx(0.0, 1.5));
    REQUIRE(e.kappa().has_value());
    CHECK(*e.kappa() == 1.5);
    CHECK(!Energy(cplx(-1.0, 0.5)).kappa().has_value());
  }
}

TEST_SUITE("free_green") {
  TEST_CASE("negative energies") {
    CHECK(rel(free_green(Energy(-1.0), 1.0), 0.02927491576215958) < 1e-14);
    CHECK(rel(free_green(Energy(-4.0), 0.5), 0.058549831524319161) < 1e-14);
  }

  TEST_CASE("conjugation") {
    const Energy e(cplx(1.0, 2.0));
    CHECK(std::abs(std::conj(free_green(e.conj(), 0.7)) - free_green(e, 0.7)) < 1e-16);
    auto rng = engine(21);
    for (int i = 0; i < 200; ++i) {
      const Energy ei(cplx(uniform(rng, -5, 5), uniform(rng, -5, 5)));
      const double r = uniform(rng, 0.01, 5.0);
      CHECK(std::abs(std::conj(free_green(ei.conj(), r)) - free_green(ei, r)) <=
            1e-15 * std::abs(free_green(ei, r)));
    }
  }

  TEST_CASE("zero separation") {
    CHECK_THROWS_AS(free_green(Energy(-1.0), 0.0), ZeroSeparation);
    CHECK_THROWS_AS(free_green(Energy(-1.0), -1.0), ZeroSeparation);
  }
}

TEST_SUITE("point_q_matrix") {
  TEST_CASE("single center at z = -4") {
    const CMatrix q = point_q_matrix(PointConfiguration({Point::Zero()}), Energy(-4.0));
    CHECK(std::abs(q(0, 0) - cplx(-1.0 / (2.0 * kPi), 0.0)) < 1e-16);
  }

  TEST_CASE("two centers at z = -1") {
    const CMatrix q = point_q_matrix(PointConfiguration({Point::Zero(), Point(1, 0, 0)}), Energy(-1.0));
    CHECK(std::abs(q(0, 0) + 0.079577471545947668) < 1e-15);
    CHECK(std::abs(q(0, 1) - 0.02927491576215958) < 1e-15);
    CHECK(q.imag().norm() == 0.0);
  }

  TEST_CASE("diagonal increment") {
    const PointConfiguration cfg({Point::Zero()});
    const Energy z(cplx(0.0, 1.0));
    const Energy z0(-1.0);
    const cplx inc = point_q_matrix(cfg, z)(0, 0) - point_q_matrix(cfg, z0)(0, 0);
    CHECK(std::abs(inc - kI * (z.sqrt_z() - z0.sqrt_z()) / (4.0 * kPi)) < 1e-16);
  }

  TEST_CASE("conjugate transpose under z -> conj z") {
    auto rng = engine(22);
    std::vector<Point> pts;
    for (int i = 0; i < 12; ++i) pts.push_back(krein::testing::random_point(rng, 2.0));
    const PointConfiguration cfg(pts);
    for (int i = 0; i < 20; ++i) {
      const Energy e(cplx(uniform(rng, -4, 4), uniform(rng, 0.1, 4)));
      const CMatrix q = point_q_matrix(cfg, e);
      CHECK((point_q_matrix(cfg, e.conj()) - q.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    }
  }

  TEST_CASE("coincident centers") {
    CHECK_THROWS_AS(PointConfiguration({Point(1, 2, 3), Point(1, 2, 3)}), CoincidentCenters);
  }
}

TEST_SUITE("green_inner_product") {
  TEST_CASE("coincident points at (-1, -4)") {
    const GreenInnerProduct g = green_inner_product(Energy(-1.0), Energy(-4.0), Point::Zero(), Point::Zero());
    CHECK(rel(g.closed_form, 0.026525823848649223) < 1e-14);
    CHECK(rel(g.quadrature, 0.026525823848649223) < 1e-10);
  }

  TEST_CASE("separation 2 at (-1, -9)") {
    const GreenInnerProduct g =
        green_inner_product(Energy(-1.0), Energy(-9.0), Point::Zero(), Point(0, 2, 0));
    CHECK(rel(g.closed_form, 0.00066077417625726199) < 1e-13);
    CHECK(rel(g.quadrature, g.closed_form) < 1e-8);
  }

  TEST_CASE("z = i against z0 = -i is a squared norm") {
    const Point a(0.3, -0.2, 0.1);
    const GreenInnerProduct g = green_inner_product(Energy(kI), Energy(-kI), a, a);
    CHECK(g.closed_form.real() > 0.0);
    CHECK(std::abs(g.closed_form.imag()) < 1e-16);
    CHECK(rel(g.quadrature, g.closed_form) < 1e-8);
  }

  TEST_CASE("equal shifts are rejected") {
    CHECK_THROWS_AS(green_inner_product(Energy(-1.0), Energy(-1.0), Point::Zero(), Point::Zero()),
                    CoincidentShift);
  }

  TEST_CASE("random pairs") {
    auto rng = engine(23);
    for (int i = 0; i < 25; ++i) {
      const Energy z(cplx(uniform(rng, -3, 3), uniform(rng, 0.2, 3)));
      const Energy z0(cplx(uniform(rng, -3, 3), uniform(rng, -3, 3)));
      const Point a = krein::testing::random_point(rng, 1.0);
      const Point b = krein::testing::random_point(rng, 1.0);
      const GreenInnerProduct g = green_inner_product(z, z0, a, b);
      CHECK(rel(g.quadrature, g.closed_form) < 1e-8);
    }
  }
}

TEST_SUITE("gram_neg_energy") {
  TEST_CASE("single center") {
    const RMatrix g = gram_neg_energy(PointConfiguration({Point::Zero()}), 1.0);
    CHECK(std::abs(g(0, 0) - 0.039788735772973834) < 1e-16);
  }

  TEST_CASE("two centers have eigenvalues (1 +- e^{-kappa d}) / (8 pi kappa)") {
    const double d = 1.3;
    const double kappa = 0.8;
    const RMatrix g = gram_neg_energy(PointConfiguration({Point::Zero(), Point(0, 0, d)}), kappa);
    const RVector mu = Eigen::SelfAdjointEigenSolver<RMatrix>(g).eigenvalues();
    const double s = 1.0 / (8.0 * kPi * kappa);
    CHECK(std::abs(mu(0) - (1.0 - std::exp(-kappa * d)) * s) < 1e-16);
    CHECK(std::abs(mu(1) - (1.0 + std::exp(-kappa * d)) * s) < 1e-16);
  }

  TEST_CASE("collinear triple is positive definite") {
    const PointConfiguration cfg({Point(0, 0, 0), Point(1, 0, 0), Point(2, 0, 0)});
    const RMatrix g = gram_neg_energy(cfg, 2.0);
    CHECK(Eigen::SelfAdjointEigenSolver<RMatrix>(g).eigenvalues()(0) > 0.0);
  }

  TEST_CASE("matches the inner products of the Green functions") {
    const PointConfiguration cfg({Point(0, 0, 0), Point(0.7, 0.2, 0)});
    const double kappa = 1.2;
    const RMatrix g = gram_neg_energy(cfg, kappa);
    // (g_m, g_n) at -kappa^2 is the derivative of q_mn in z, i.e. the z0 -> z limit
    const Energy e = Energy::from_kappa(kappa);
    const Energy e0 = Energy::from_kappa(kappa * (1.0 + 1e-5));
    const GreenInnerProduct ip = green_inner_product(e, e0, cfg.centers()[0], cfg.centers()[1]);
    CHECK(std::abs(ip.closed_form.real() - g(0, 1)) < 1e-5 * g(0, 1));
  }
}

TEST_SUITE("lattice_tail_bound") {
  TEST_CASE("single point") {
    const TailBound t = lattice_tail_bound(PointConfiguration({Point::Zero()}), 0, 1.0);
    CHECK(t.rowsum == 0.0);
    CHECK(t.rowsum <= t.bound);
  }

  TEST_CASE("two points") {
    const TailBound t = lattice_tail_bound(PointConfiguration({Point::Zero(), Point(2, 0, 0)}), 0, 1.0);
    CHECK(std::abs(t.rowsum - std::exp(-2.0)) < 1e-16);
    CHECK(t.bound > 3.25 * std::exp(-2.0));
    CHECK(t.rowsum <= t.bound);
  }

  TEST_CASE("bound series value") {
    // kappa d = 3: 13/4 e^{-3} + sum_{n>=2} (3n^2 + 1/4) e^{-(n-1/2) 3}
    const TailBound t = lattice_tail_bound(PointConfiguration({Point::Zero(), Point(1, 0, 0)}), 0, 3.0);
    double tail = 0.0;
    for (int n = 2; n < 60; ++n) tail += (3.0 * n * n + 0.25) * std::exp(-(n - 0.5) * 3.0);
    CHECK(std::abs(t.bound - (3.25 * std::exp(-3.0) + tail)) < 1e-15);
  }

  TEST_CASE("row sums on a unit lattice") {
    const PointConfiguration cfg = make_lattice({5, 5, 5}, 1.0, Point::Zero());
    CHECK(cfg.min_distance() == doctest::Approx(1.0).epsilon(1e-15));
    // a corner has only 3 nearest neighbours and stays under the bound
    const TailBound corner = lattice_tail_bound(cfg, 0, 3.0);
    CHECK(corner.rowsum <= corner.bound);
    CHECK(gram_offdiag_norm(cfg, 3.0) < 1.0);
  }
}

TEST_SUITE("free resolvent of radial sources") {
  // Closed form of the Yukawa-Gaussian convolution via erfc, evaluated in
  // 30-digit arithmetic outside this code base.
  TEST_CASE("Gaussian sources against the erfc closed form") {
    struct Case {
      cplx z;
      double sigma, r;
      cplx expected;
    };
    const Case cases[] = {
        {-1.0, 0.5, 5.0, {0.00012151629859039163, 0.0}},
        {-4.0, 0.3, 0.7, {0.031243518517656935, 0.0}},
        {-1.0, 0.2, 0.05, {0.24597977066500644, 0.0}},
        {kI, 0.25, 0.4, {0.12340888536243717, 0.037543974233165179}},
        {cplx(-1.0, 1.0), 0.3, 1.2, {0.016273517112739129, 0.0089160154182231134}},
    };
    for (const Case& c : cases) {
      const RadialSource h = RadialSource::gaussian(Point(0.1, -0.2, 0.3), c.sigma);
      const cplx v = apply_free_resolvent(Energy(c.z), h, Point(0.1, -0.2, 0.3) + Point(0, c.r, 0));
      CHECK(rel(v, c.expected) < 1e-10);
    }
  }

  TEST_CASE("value at the source center is regular") {
    const RadialSource h = RadialSource::gaussian(Point::Zero(), 0.3);
    const cplx at = apply_free_resolvent(Energy(-1.0), h, Point::Zero());
    const cplx near = apply_free_resolvent(Energy(-1.0), h, Point(1e-7, 0, 0));
    CHECK(std::isfinite(at.real()));
    CHECK(rel(near, at) < 1e-10);
  }

  TEST_CASE("Helmholtz image inverts to its envelope") {
    auto rng = engine(24);
    for (int i = 0; i < 10; ++i) {
      const Energy e(cplx(uniform(rng, -3, 1), uniform(rng, -2, 2)));
      const RadialSource h = RadialSource::helmholtz_image(Point::Zero(), 0.4, e.z());
      const double r = uniform(rng, 0.0, 2.0);
      const cplx v = apply_free_resolvent(e, h, Point(r, 0, 0));
      CHECK(std::abs(v - h.envelope(r)) < 1e-10);
    }
  }

  TEST_CASE("narrow source approaches the Green kernel") {
    const Energy e(-1.0);
    const Point p(2.0, 0.0, 0.0);
    double previous = 1.0;
    for (double sigma : {0.2, 0.1, 0.05}) {
      const RadialSource h = RadialSource::gaussian(Point::Zero(), sigma);
      const double err = std::abs(apply_free_resolvent(e, h, p) - free_green(e, 2.0));
      // O(sigma^2) approach: e^{kappa^2 sigma^2 / 2} - 1
      CHECK(err < 0.6 * sigma * sigma * std::abs(free_green(e, 2.0)));
      CHECK(err < previous);
      previous = err;
    }
  }
}
