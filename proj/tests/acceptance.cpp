// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "hdg/experiment.hpp"
#include "hdg/time_domain.hpp"

using namespace hdg;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s [%s]\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void guarded(int id, const std::string& what, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [pass, detail] = body();
    report(id, pass, what, detail);
  } catch (const std::exception& e) {
    report(id, false, what, std::string("exception: ") + e.what());
  }
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

ExperimentResult ladder(const std::string& test, int k, FluxVariant v, std::vector<int> levels = {1, 2, 3, 4}) {
  ExperimentConfig cfg;
  cfg.test = test;
  cfg.k = k;
  cfg.variant = v;
  cfg.levels = std::move(levels);
  cfg.timing = false;
  return run_experiment(cfg);
}

// Finest-pair EOC windows [k+2-0.3, k+2+0.5] and [k+1-0.3, k+1+0.5].
std::pair<bool, std::string> rate_window(const ExperimentResult& r, int k) {
  const ExperimentRow& last = r.rows.back();
  const double eu = last.eoc_u->value, es = last.eoc_sigma->value;
  const bool ok = !last.eoc_u->saturated && !last.eoc_sigma->saturated && eu >= k + 2 - 0.3 &&
                  eu <= k + 2 + 0.5 && es >= k + 1 - 0.3 && es <= k + 1 + 0.5;
  return {ok, fmt("k=%g eoc_u=%.3f eoc_sigma=%.3f", k, eu, es)};
}

std::pair<bool, std::string> combine(const std::vector<std::pair<bool, std::string>>& parts) {
  bool ok = true;
  std::string d;
  for (const auto& [p, s] : parts) {
    ok = ok && p;
    d += (d.empty() ? "" : "; ") + s;
  }
  return {ok, d};
}

}  // namespace

int main() {
  guarded(1, "polynomial exactness, constant coefficients, mixed BCs, k=1, n=2", [] {
    const ExperimentRow row = ladder("polynomial", 1, FluxVariant::first_order, {2}).rows[0];
    const bool ok = row.errors.rel_err_u <= 1e-9 && row.errors.rel_err_sigma <= 1e-9;
    return std::pair{ok, fmt("rel_err_u=%.2e rel_err_sigma=%.2e", row.errors.rel_err_u, row.errors.rel_err_sigma)};
  });

  guarded(2, "optimal rates, first-order variant, varcoeff, k=1 and k=2", [] {
    return combine({rate_window(ladder("varcoeff", 1, FluxVariant::first_order), 1),
                    rate_window(ladder("varcoeff", 2, FluxVariant::first_order), 2)});
  });

  guarded(3, "plane waves, all-Dirichlet, k=1", [] {
    auto p = rate_window(ladder("pwave", 1, FluxVariant::first_order), 1);
    auto s = rate_window(ladder("swave", 1, FluxVariant::first_order), 1);
    p.second = "pwave " + p.second;
    s.second = "swave " + s.second;
    return combine({p, s});
  });

  guarded(4, "conservative variant rates and the kappa=0 steady state", [] {
    auto parts = std::vector{rate_window(ladder("varcoeff", 1, FluxVariant::conservative), 1),
                             rate_window(ladder("varcoeff", 2, FluxVariant::conservative), 2)};
    const Mesh mesh = tag_boundary(build_structured_cube(2), BoundaryConfig::mixed);
    const Spaces spaces(1);
    const ExactCase c = make_case("varcoeff", 0.0);
    AssemblyOptions opt;
    opt.variant = FluxVariant::conservative;
    HybridSystem sys;
    SolveReport rep;
    const SolutionFields sol = solve_problem(mesh, spaces, c.material, c.data(), opt, &sys, &rep);
    const ErrorReport err = compute_errors(mesh, spaces, sol, c);
    parts.push_back({std::isfinite(err.err_u) && rep.residual <= rep.residual_bound,
                     fmt("kappa=0: rcond=%.2e min_local_rcond=%.2e rel_err_u=%.2e", rep.rcond, sys.min_local_rcond,
                         err.rel_err_u)});
    return combine(parts);
  });

  guarded(5, "energy identity, varcoeff, n=2, k=1, first-order", [] {
    ExperimentConfig cfg;
    cfg.levels = {2};
    cfg.timing = false;
    cfg.check_energy_identity = true;
    const ExperimentRow row = run_experiment(cfg).rows[0];
    return std::pair{*row.energy_gap <= 1e-8, fmt("relative gap %.2e", *row.energy_gap)};
  });

  guarded(6, "condensed solve matches the monolithic solve, n=1, k=1", [] {
    double worst = 0.0;
    for (FluxVariant v : {FluxVariant::first_order, FluxVariant::time_reversed, FluxVariant::kappa_scaled,
                          FluxVariant::conservative}) {
      ExperimentConfig cfg;
      cfg.variant = v;
      cfg.levels = {1};
      cfg.timing = false;
      cfg.oracle_monolithic = true;
      worst = std::max(worst, *run_experiment(cfg).rows[0].monolithic_gap);
    }
    return std::pair{worst <= 1e-9, fmt("worst relative difference over variants %.2e", worst)};
  });

  guarded(7, "semidiscrete energy laws on 20 random states, n=1, k=1", [] {
    const Mesh mesh = tag_boundary(build_structured_cube(1), BoundaryConfig::mixed);
    const Spaces spaces(1);
    std::mt19937 rng(2024);
    std::normal_distribution<double> g;
    double worst_cons = 0.0, worst_flux = 0.0;
    for (TransientFlux f : {TransientFlux::accumulating, TransientFlux::dissipative, TransientFlux::conservative}) {
      const SemidiscreteSystem sys = assemble_semidiscrete(mesh, spaces, Material::variable_preset(), f);
      for (int t = 0; t < 20; ++t) {
        RVector y(sys.state_size());
        for (auto& x : y) x = g(rng);
        const State st = make_state(sys, y);
        const double rate = energy_rate(sys, st);
        if (f == TransientFlux::conservative) {
          worst_cons = std::max(worst_cons, std::abs(rate) / energy(sys, st));
        } else {
          const double expected = sys.sign() * interface_dissipation(sys, st);
          worst_flux = std::max(worst_flux, std::abs(rate - expected) / std::abs(expected));
        }
      }
    }
    return std::pair{worst_cons <= 1e-10 && worst_flux <= 1e-10,
                     fmt("conservative |rate|/E=%.2e, +-flux relative mismatch=%.2e", worst_cons, worst_flux)};
  });

  guarded(8, "Newmark drift of the conservative flux drops by 3..5 when dt halves", [] {
    const Mesh mesh = tag_boundary(build_structured_cube(2), BoundaryConfig::mixed);
    const Spaces spaces(1);
    const SemidiscreteSystem sys =
        assemble_semidiscrete(mesh, spaces, Material::variable_preset(), TransientFlux::conservative);
    const VectorField u0 = [](const Vec3& x) {
      const double bump = std::sin(M_PI * x[2]);
      return CVec3(bump * x[0], 0.5 * bump, bump * x[1] * x[1]);
    };
    const State s0 = initial_state(sys, mesh, spaces, u0, {});
    const double e0 = energy(sys, s0);
    auto drift = [&](double dt) {
      const Stepper stepper(sys, dt);
      State s = s0;
      for (int i = 0; i < 200; ++i) s = stepper.step(s);
      return std::abs(energy(sys, s) - e0) / e0;
    };
    const double d1 = drift(0.02), d2 = drift(0.01);
    const double ratio = d2 > 0.0 ? d1 / d2 : INFINITY;
    return std::pair{ratio >= 3.0 && ratio <= 5.0,
                     fmt("relative drift %.2e (dt=0.02), %.2e (dt=0.01), ratio %.2f", d1, d2, ratio)};
  });

  guarded(9, "fixed h*kappa = sqrt(3)/10 impedance study, n=1..4", [] {
    const ExperimentResult r = ladder("hk-const", 1, FluxVariant::first_order);
    const double u0 = r.rows[0].errors.rel_err_u, s0 = r.rows[0].errors.rel_err_sigma;
    bool bounded = true, declining = true;
    std::string d;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      const ErrorReport& e = r.rows[i].errors;
      bounded = bounded && e.rel_err_u <= 2 * u0 && e.rel_err_sigma <= 2 * s0;
      if (i > 0) declining = declining && e.rel_err_u <= r.rows[i - 1].errors.rel_err_u;
      d += (i ? ", " : "") + fmt("n=%g u=%.2e s=%.2e", r.rows[i].n, e.rel_err_u, e.rel_err_sigma);
    }
    d += bounded ? "; bounded" : "; exceeds 2x coarsest";
    d += declining ? ", displacement non-increasing" : ", displacement not monotone";
    return std::pair{bounded && declining, d};
  });

  guarded(10, "local solver condition for kappa*h_K in [1e-3, 0.1], zero data gives zero", [] {
    const Mesh mesh = tag_boundary(build_structured_cube(1), BoundaryConfig::mixed);
    const Spaces spaces(1);
    const LocalBlocks b = assemble_local_blocks(mesh, spaces, Material::variable_preset(), 0);
    double worst = 0.0, zero = 0.0;
    for (int i = 0; i <= 16; ++i) {
      const double kh = std::pow(10.0, -3.0 + 2.0 * i / 16);
      const LocalFactorization f = factorize_local(b, kh / b.h, FluxVariant::first_order);
      worst = std::max(worst, f.condition_estimate());
      const CondensedElement c = condense(f, b);
      const CVector trace = CVector::Zero(c.lift.cols());
      const CVector x = recover(f, c, trace, load_lift(f, b, CVector::Zero(spaces.dim_w())));
      zero = std::max(zero, x.cwiseAbs().maxCoeff());
    }
    // eps * cond <= ~1e-8 keeps eight digits in the local solve
    return std::pair{worst <= 1e8 && zero <= 1e-12, fmt("max condition estimate %.2e, max |x| %.1e", worst, zero)};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
