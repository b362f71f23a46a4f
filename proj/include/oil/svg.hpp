// Copyright 2026 The OIL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OIL_SVG_HPP
#define OIL_SVG_HPP

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "oil/bench.hpp"

namespace oil {

// Static line chart of utility_kl and mi_output against beta.
inline void write_sweep_svg(const TradeoffCurve& curve, std::ostream& os) {
  const double w = 640.0, h = 400.0, ml = 60.0, mr = 20.0, mt = 24.0, mb = 48.0;
  double bmax = 1.0, ymax = 1e-12;
  for (const auto& p : curve.points) {
    bmax = std::max(bmax, p.beta);
    ymax = std::max({ymax, p.utility_kl, p.mi_output});
  }
  auto px = [&](double beta) { return ml + (w - ml - mr) * beta / bmax; };
  auto py = [&](double v) { return h - mb - (h - mt - mb) * v / ymax; };
  auto polyline = [&](const char* color, auto field) {
    os << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& p : curve.points) os << px(p.beta) << ',' << py(field(p)) << ' ';
    os << "\"/>\n";
  };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
     << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "  <line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
     << h - mb << "\" stroke=\"black\"/>\n"
     << "  <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
     << "\" stroke=\"black\"/>\n";
  polyline("#1f77b4", [](const TradeoffPoint& p) { return p.utility_kl; });
  polyline("#d62728", [](const TradeoffPoint& p) { return p.mi_output; });
  for (const auto& p : curve.points) {
    os << "  <circle cx=\"" << px(p.beta) << "\" cy=\"" << py(p.utility_kl)
       << "\" r=\"3\" fill=\"#1f77b4\"/>\n"
       << "  <circle cx=\"" << px(p.beta) << "\" cy=\"" << py(p.mi_output)
       << "\" r=\"3\" fill=\"#d62728\"/>\n"
       << "  <text x=\"" << px(p.beta) << "\" y=\"" << h - mb + 16
       << "\" font-size=\"11\" text-anchor=\"middle\">" << detail::format_g6(p.beta)
       << "</text>\n";
  }
  os << "  <text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 8
     << "\" font-size=\"13\" text-anchor=\"middle\">beta</text>\n"
     << "  <text x=\"" << ml + 8 << "\" y=\"" << mt + 2
     << "\" font-size=\"12\" fill=\"#1f77b4\">utility_kl</text>\n"
     << "  <text x=\"" << ml + 88 << "\" y=\"" << mt + 2
     << "\" font-size=\"12\" fill=\"#d62728\">mi_output</text>\n"
     << "</svg>\n";
}

}  // namespace oil

#endif  // OIL_SVG_HPP
