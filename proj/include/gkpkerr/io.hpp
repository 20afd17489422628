// Copyright 2026 The gkpkerr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <string>
#include <vector>

#include "gkpkerr/fock.hpp"
#include "gkpkerr/sbs.hpp"
#include "gkpkerr/wigner.hpp"

namespace gkpkerr {

/// One line of the results table.
struct ResultRow {
  double delta = 0.0;
  double gamma = 0.0;
  int n_rounds = 0;
  std::string decoder;
  double fidelity = 0.0;
  double infidelity = 0.0;
  double success_prob = 0.0;
  int dim = 0;
  /// Semicolon-separated flags; empty when the point is clean.
  std::string flags;
};

inline constexpr const char* kResultsHeader = "delta,gamma,n_rounds,decoder,fidelity,infidelity,success_prob,dim,flags";

/// Shortest-exact formatting (%.17g) used for every number written to disk.
std::string format_double(double value);

std::string results_csv(const std::vector<ResultRow>& rows);
/// Header "q,p,w"; p is the outer loop, q the inner one.
std::string wigner_csv(const WignerGrid& grid);
/// Columns n,Re,Im.
std::string codeword_csv(const Vector& amplitudes);
std::string sbs_records_jsonl(const std::vector<SbsRecord>& records);

/// Heat map of a Wigner grid (diverging colors, symmetric about zero).
std::string wigner_svg(const WignerGrid& grid, const std::string& title);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};
/// Log-log line plot; non-positive points are dropped.
std::string loglog_svg(const std::vector<PlotSeries>& series, const std::string& title, const std::string& x_label,
                       const std::string& y_label);

/// Writes `content` to `path`, creating parent directories.
void write_text(const std::string& path, const std::string& content);

}  // namespace gkpkerr
