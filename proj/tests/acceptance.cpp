// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

// Prints one PASS/FAIL line per acceptance criterion; exits non-zero on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "gerost/config.hpp"
#include "gerost/datagen.hpp"
#include "gerost/experiment.hpp"
#include "gerost/properties.hpp"
#include "gerost/random.hpp"
#include "gerost/tracker.hpp"

namespace {

using namespace gerost;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::printf("%s  %2d  %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += ok ? 0 : 1;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

long total_failures(const PropertyReport& r) {
  long n = 0;
  for (const PropertyResult& p : r.properties) n += p.failures;
  return n;
}

long total_trials(const PropertyReport& r) {
  long n = 0;
  for (const PropertyResult& p : r.properties) n = std::max(n, p.trials);
  return n;
}

double worst_margin(const PropertyReport& r) {
  double m = INFINITY;
  for (const PropertyResult& p : r.properties) m = std::min(m, p.worst_margin);
  return m;
}

// Runs a property suite; passes when it reports no failures within the time limit.
void suite_criterion(int id, const std::string& title, const std::string& suite,
                     long budget, double time_limit) {
  const auto start = Clock::now();
  const PropertyReport r = run_property_suite(suite, budget);
  const double secs = seconds_since(start);
  std::string detail = suite + " budget " + std::to_string(budget) + ", " +
                       std::to_string(total_failures(r)) + " failures, worst margin " +
                       fmt("%.3g", worst_margin(r)) + fmt(", %.2f s", secs);
  if (!r.note.empty()) detail += " (" + r.note + ")";
  const bool ok = r.passed() && total_trials(r) > 0 && secs < time_limit;
  report(id, title, ok, detail);
}

SubspacePoint random_start(std::uint64_t seed, int n, int k) {
  Rng rng(seed);
  return orthonormalize(gaussian_matrix(rng, n, k));
}

// Static subspace, no noise, d = k = 3, n = 20, rho at the floor, K = 3.
void ideal_convergence() {
  const int n = 20, k = 3;
  const RotatingSubspaceModel m = make_rotating_model(n, k, 0.0, 100, 1.0, 0.0, 5);
  TrackerConfig c;
  c.n = n;
  c.k = k;
  c.d = k;
  c.T = k;
  c.K = 3;
  c.radius = FixedRadius{kTol.rho_floor};
  Tracker tr(c, random_start(5, n, k));
  const SubspacePoint truth = m.subspace_at(0);

  double prev = chordal_distance(*tr.estimate(), truth);
  const double start = prev;
  double worst_ratio = 0.0;
  long first_below = -1;
  for (long t = 0; t < 100; ++t) {
    if (!tr.step(frame_at(m, nullptr, t).observation)) continue;
    const double cur = chordal_distance(*tr.estimate(), truth);
    if (prev > 1e-8 && prev < 0.5) worst_ratio = std::max(worst_ratio, cur / prev);
    if (first_below < 0 && cur < 1e-6) first_below = t + 1;
    prev = cur;
  }
  const bool ok = first_below > 0 && worst_ratio <= 0.95;
  report(5, "ideal-case exponential convergence", ok,
         fmt("d_c %.3g -> %.3g, ", start, prev) + "below 1e-6 at step " +
             std::to_string(first_below) + fmt(", worst ratio %.3f (limit 0.95)", worst_ratio));
}

// GeRoST with rho = 1e-9 against GREAT on 20 seeded streams.
void great_reduction() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RotatingSubspaceModel m = make_rotating_model(30, 3, 0.5, 60, 1.0, 0.01, seed);
    TrackerConfig g;
    g.n = 30;
    g.k = 3;
    g.d = 5;
    g.T = 8;
    g.K = 3;
    g.mode = TrackerMode::kGreat;
    TrackerConfig r = g;
    r.mode = TrackerMode::kGerost;
    r.radius = FixedRadius{1e-9};
    r.eps_bis = 1e-12;
    const SubspacePoint init = random_start(derive_seed(seed, {7}), 30, 3);
    Tracker a(g, init), b(r, init);
    for (long t = 0; t < 60; ++t) {
      const Vector u = frame_at(m, nullptr, t).observation;
      a.step(u);
      b.step(u);
    }
    worst = std::max(worst, projector_distance(*a.estimate(), *b.estimate()));
  }
  report(7, "GREAT reduction", worst <= 1e-6,
         fmt("max final projector distance %.3g over 20 streams (limit 1e-6)", worst));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Desk-scale video study (criteria 8 and 10); runs last.
void desk_study() {
  const ExperimentConfig cfg = load_experiment_config(GEROST_SOURCE_DIR "/configs/desk.ini");
  const auto start = Clock::now();
  std::vector<SeedResult> results;
  for (std::uint64_t seed : cfg.run.seeds) results.push_back(run_seed(cfg, seed));
  const double secs = seconds_since(start);

  auto find = [](const SeedResult& r, TrackerMode mode) -> const TrackerRun& {
    for (const TrackerRun& run : r.runs) {
      if (run.cfg.mode == mode) return run;
    }
    throw std::runtime_error("desk config lacks a tracker mode");
  };

  int wins = 0;
  double min_auc = 1.0;
  std::string aucs;
  for (const SeedResult& r : results) {
    const double ge = find(r, TrackerMode::kGerost).roc.auc;
    const double gr = find(r, TrackerMode::kGreat).roc.auc;
    wins += ge >= gr ? 1 : 0;
    min_auc = std::min(min_auc, ge);
    aucs += fmt(" %.5f/%.5f", ge, gr);
  }
  const int seeds = static_cast<int>(results.size());
  report(8, "desk-scale AUC ordering", wins * 5 >= 4 * seeds && min_auc >= 0.90 && secs < 120.0,
         "GeRoST >= GREAT on " + std::to_string(wins) + "/" + std::to_string(seeds) +
             " seeds, min GeRoST AUC " + fmt("%.5f", min_auc) + fmt(", %.1f s;", secs) +
             " GeRoST/GREAT:" + aucs);

  const long occ = cfg.generator.occlusion_start;
  bool ok = true;
  std::string detail;
  for (const SeedResult& r : results) {
    const TrackerRun& run = find(r, TrackerMode::kGerost);
    std::vector<double> pre, during, rho;
    bool capped = true;
    for (const StepDiagnostics& d : run.diagnostics) {
      if (d.t < occ) {
        pre.push_back(d.lambda_star);
      } else {
        during.push_back(d.lambda_star);
        rho.push_back(d.rho_t);
        capped = capped && d.radius_capped;
      }
    }
    const double mp = median(pre), md = median(during);
    const double spread = *std::max_element(rho.begin(), rho.end()) -
                          *std::min_element(rho.begin(), rho.end());
    ok = ok && std::abs(mp - 2.0) <= 0.05 && md > mp && capped && spread <= 1e-12;
    detail += " seed " + std::to_string(r.seed) + fmt(": %.6f -> %.4f, rho %.6f", mp, md, rho[0]) +
              (capped ? " capped" : " uncapped") + ";";
  }
  report(10, "lambda*/rho trace", ok, "median lambda* pre -> during occlusion:" + detail);
}

}  // namespace

int main() {
  try {
    suite_criterion(1, "spectral-gap bound", "spectral-gap", 1000, 10.0);
    suite_criterion(2, "inner-max correctness", "inner-max", 100, 60.0);
    suite_criterion(3, "gradient check", "gradient", 100, INFINITY);
    suite_criterion(4, "descent property", "descent", 200, INFINITY);
    ideal_convergence();
    suite_criterion(6, "PL spot-check", "pl", 100, INFINITY);
    great_reduction();
    suite_criterion(9, "error-bound non-violation", "bound", 10, INFINITY);
    desk_study();
  } catch (const std::exception& e) {
    std::printf("FAIL  acceptance aborted: %s\n", e.what());
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
