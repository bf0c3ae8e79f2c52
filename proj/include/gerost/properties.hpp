// Copyright 2026 The gerost Authors
// SPDX-License-Identifier: Apache-2.0

// Randomized property suites over the library. Each suite draws `budget`
// seeded instances and reports, per property, how many were checked, how
// many failed and the smallest margin seen (negative margin = failure).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gerost {

struct PropertyResult {
  std::string name;
  long trials = 0;
  long failures = 0;
  double worst_margin = 0.0;  // min over trials of (tolerance - error)
  long skipped = 0;           // draws that did not meet the property's preconditions
};

struct PropertyReport {
  std::string suite;
  long budget = 0;
  std::vector<PropertyResult> properties;
  std::string note;

  bool passed() const;
};

/// Suite names: geometry, spectral-gap, inner-max, gradient, descent, pl,
/// bound.
const std::vector<std::string>& property_suite_names();

/// Throws ConfigError for an unknown suite name. A zero budget yields an
/// empty report with a "no trials" note.
PropertyReport run_property_suite(const std::string& suite, long budget,
                                  std::uint64_t seed = 20260101);

/// Human-readable multi-line rendering.
std::string format_report(const PropertyReport& report);

}  // namespace gerost
