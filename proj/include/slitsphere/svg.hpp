#pragma once

// Minimal self-contained SVG emission: the eigenvalue heatmap over
// (delta1, delta2) with the lambda = 3/4 level curve overlaid, and the
// coefficient-ratio plot along the curve.

#include "slitsphere/sweep.hpp"

namespace slitsphere::svg {

namespace detail {

struct Color {
  int r, g, b;
};

// small diverging-free sequential ramp (dark blue -> teal -> yellow)
inline Color colormap(double t) {
  static const Color stops[5] = {{33, 12, 74}, {60, 78, 138}, {42, 140, 130}, {120, 198, 83}, {247, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4;
  int i = std::min(3, (int)t);
  double f = t - i;
  auto mix = [&](int a, int b) { return (int)std::lround(a + f * (b - a)); };
  return {mix(stops[i].r, stops[i + 1].r), mix(stops[i].g, stops[i + 1].g),
          mix(stops[i].b, stops[i + 1].b)};
}

inline std::string rgb(const Color& c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "rgb(%d,%d,%d)", c.r, c.g, c.b);
  return buf;
}

}  // namespace detail

// Heatmap of lambda_1A over the sweep grid; the level curve rides on top.
inline void write_heatmap_svg(std::ostream& os, const std::vector<sweep::SweepRecord>& records,
                              const std::vector<sweep::CurvePoint>& curve, double level = 0.75) {
  std::set<double> xs_set, ys_set;
  for (const auto& r : records)
    if (std::isfinite(r.lambda1A)) {
      xs_set.insert(r.delta1);
      ys_set.insert(r.delta2);
    }
  std::vector<double> xs(xs_set.begin(), xs_set.end()), ys(ys_set.begin(), ys_set.end());
  if (xs.empty()) {
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='200' height='60'>"
          "<text x='10' y='30'>no data</text></svg>\n";
    return;
  }
  double vmin = 1e300, vmax = -1e300;
  std::map<std::pair<double, double>, double> val;
  for (const auto& r : records)
    if (std::isfinite(r.lambda1A)) {
      val[{r.delta1, r.delta2}] = r.lambda1A;
      vmin = std::min(vmin, r.lambda1A);
      vmax = std::max(vmax, r.lambda1A);
    }
  const double W = 640, H = 560, L = 70, B = 60, T = 30, R = 110;
  double x0 = xs.front(), x1 = xs.back(), y0 = ys.front(), y1 = ys.back();
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - B - T); };

  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  double cw = (W - L - R) / std::max<size_t>(1, xs.size() - 1);
  double ch = (H - B - T) / std::max<size_t>(1, ys.size() - 1);
  for (const auto& [key, v] : val) {
    double t = (v - vmin) / std::max(1e-300, vmax - vmin);
    os << "<rect x='" << px(key.first) - cw / 2 << "' y='" << py(key.second) - ch / 2 << "' width='"
       << cw + 0.5 << "' height='" << ch + 0.5 << "' fill='" << detail::rgb(detail::colormap(t))
       << "'/>\n";
  }
  if (!curve.empty()) {
    os << "<polyline fill='none' stroke='white' stroke-width='2.5' points='";
    for (const auto& cp : curve) os << px(cp.delta1_cross) << ',' << py(cp.delta2) << ' ';
    os << "'/>\n";
    os << "<polyline fill='none' stroke='black' stroke-width='1' points='";
    for (const auto& cp : curve) os << px(cp.delta1_cross) << ',' << py(cp.delta2) << ' ';
    os << "'/>\n";
  }
  // axes
  os << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - R << "' y2='" << H - B
     << "' stroke='black'/>\n";
  os << "<line x1='" << L << "' y1='" << H - B << "' x2='" << L << "' y2='" << T
     << "' stroke='black'/>\n";
  for (double v = 0.5; v < 3.1; v += 0.5) {
    if (v >= x0 && v <= x1) {
      os << "<line x1='" << px(v) << "' y1='" << H - B << "' x2='" << px(v) << "' y2='" << H - B + 5
         << "' stroke='black'/><text x='" << px(v) << "' y='" << H - B + 18
         << "' font-size='11' text-anchor='middle'>" << v << "</text>\n";
    }
    if (v >= y0 && v <= y1) {
      os << "<line x1='" << L - 5 << "' y1='" << py(v) << "' x2='" << L << "' y2='" << py(v)
         << "' stroke='black'/><text x='" << L - 8 << "' y='" << py(v) + 4
         << "' font-size='11' text-anchor='end'>" << v << "</text>\n";
    }
  }
  os << "<text x='" << (L + W - R) / 2 << "' y='" << H - 25
     << "' font-size='13' text-anchor='middle'>delta1</text>\n";
  os << "<text x='18' y='" << (T + H - B) / 2 << "' font-size='13' transform='rotate(-90 18 "
     << (T + H - B) / 2 << ")' text-anchor='middle'>delta2</text>\n";
  os << "<text x='" << L << "' y='18' font-size='13'>lambda_1A(delta); overlay: level "
     << level << "</text>\n";
  // colorbar
  double bx = W - R + 30, bw = 16, bh = H - B - T;
  for (int i = 0; i < 120; ++i) {
    double t = 1.0 - i / 119.0;
    os << "<rect x='" << bx << "' y='" << T + bh * i / 120.0 << "' width='" << bw << "' height='"
       << bh / 120.0 + 0.5 << "' fill='" << detail::rgb(detail::colormap(t)) << "'/>\n";
  }
  char lbl[64];
  std::snprintf(lbl, sizeof lbl, "%.3g", vmax);
  os << "<text x='" << bx + bw + 4 << "' y='" << T + 10 << "' font-size='11'>" << lbl << "</text>\n";
  std::snprintf(lbl, sizeof lbl, "%.3g", vmin);
  os << "<text x='" << bx + bw + 4 << "' y='" << T + bh << "' font-size='11'>" << lbl << "</text>\n";
  os << "</svg>\n";
}

// |alpha2|/|alpha1| along the level curve, both extraction methods.
inline void write_ratio_svg(std::ostream& os, const std::vector<sweep::CurvePoint>& curve) {
  const double W = 640, H = 420, L = 60, B = 50, T = 30, R = 30;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  if (curve.empty()) {
    os << "<text x='20' y='40'>empty curve</text></svg>\n";
    return;
  }
  double x0 = curve.front().delta2, x1 = curve.back().delta2;
  for (const auto& cp : curve) {
    x0 = std::min(x0, cp.delta2);
    x1 = std::max(x1, cp.delta2);
  }
  double ymax = 1.2;
  auto px = [&](double x) { return L + (x - x0) / std::max(1e-300, x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - y / ymax * (H - B - T); };
  for (double g = 0.2; g <= 1.21; g += 0.2) {
    os << "<line x1='" << L << "' y1='" << py(g) << "' x2='" << W - R << "' y2='" << py(g)
       << "' stroke='#dddddd'/>\n";
    char lbl[32];
    std::snprintf(lbl, sizeof lbl, "%.1f", g);
    os << "<text x='" << L - 6 << "' y='" << py(g) + 4 << "' font-size='11' text-anchor='end'>"
       << lbl << "</text>\n";
  }
  os << "<line x1='" << L << "' y1='" << py(1.0) << "' x2='" << W - R << "' y2='" << py(1.0)
     << "' stroke='#bb3333' stroke-dasharray='5,4'/>\n";
  auto polyline = [&](bool ef, const char* color) {
    os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.8' points='";
    for (const auto& cp : curve) {
      double v = ef ? cp.ratio_ef : cp.ratio_moussaoui;
      if (std::isfinite(v)) os << px(cp.delta2) << ',' << py(std::min(v, ymax)) << ' ';
    }
    os << "'/>\n";
  };
  polyline(false, "#1f5fa8");
  polyline(true, "#2a8c4a");
  os << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - R << "' y2='" << H - B
     << "' stroke='black'/>\n";
  os << "<line x1='" << L << "' y1='" << H - B << "' x2='" << L << "' y2='" << T
     << "' stroke='black'/>\n";
  for (double v = 0.5; v < 3.2; v += 0.5)
    if (v >= x0 && v <= x1)
      os << "<line x1='" << px(v) << "' y1='" << H - B << "' x2='" << px(v) << "' y2='" << H - B + 5
         << "' stroke='black'/><text x='" << px(v) << "' y='" << H - B + 18
         << "' font-size='11' text-anchor='middle'>" << v << "</text>\n";
  os << "<text x='" << (L + W - R) / 2 << "' y='" << H - 18
     << "' font-size='13' text-anchor='middle'>delta2 along the curve</text>\n";
  os << "<text x='" << L << "' y='18' font-size='13'>|alpha2|/|alpha1| on lambda_1A = 3/4: "
        "blue = dual extraction, green = trace jump; dashed = 1</text>\n";
  os << "</svg>\n";
}

}  // namespace slitsphere::svg
