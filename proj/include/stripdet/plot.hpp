// Copyright 2026 The stripdet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>

#include "stripdet/table.hpp"

namespace stripdet {

enum class PlotKind { Tail, Fit, Spectrum };

/// "tail", "fit" or "spectrum"; ConfigError otherwise.
PlotKind parse_plot_kind(const std::string& name);

struct PlotOutput {
  std::string svg;
  /// The plotted series as CSV, in the order drawn.
  std::string data_csv;
  /// Name of the reference curve ("exp(-K/4)", "exp(-K/2)", "bound",
  /// "least squares"); empty when none.
  std::string overlay;
};

/// Plot data and a plain SVG rendering.
///  tail:     K against fraction (log scale), overlay exp(-K/rate) where rate
///            is given or recognized from a "bound" column.
///  fit:      y against x with the least-squares line; x and y columns are
///            picked from known names (sites/var, N/gap, ...).
///  spectrum: gamma against exponent index with stderr bars.
/// A table without rows gives axes only. Missing columns throw ConfigError.
PlotOutput plot_export(const Table& table, PlotKind kind, const std::string& title = "",
                       std::optional<double> tail_rate = std::nullopt);

/// Same, from CSV text; empty text is treated as a table without rows.
PlotOutput plot_export_csv(const std::string& csv, PlotKind kind, const std::string& title = "",
                           std::optional<double> tail_rate = std::nullopt);

}  // namespace stripdet
