#include "toposim/svg.hpp"

#include "toposim/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace toposim {

namespace {

const char* const kDimColor[] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
const char* const kGroupColor[] = {"#1f77b4", "#ff7f0e"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

// Plot area at (x0, y0) of size w x h mapping [lo, hi] ranges; y grows upward.
struct Panel {
  double x0, y0, w, h;
  double xlo, xhi, ylo, yhi;
  bool xlog = false;

  double px(double x) const {
    const double t = xlog ? (std::log10(x) - std::log10(xlo)) / (std::log10(xhi) - std::log10(xlo))
                          : (x - xlo) / (xhi - xlo);
    return x0 + t * w;
  }
  double py(double y) const { return y0 + h - (y - ylo) / (yhi - ylo) * h; }
};

void pad_range(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
    return;
  }
  const double m = 0.05 * (hi - lo);
  lo -= m;
  hi += m;
}

void axes(std::ostream& os, const Panel& p, const std::string& xlabel, const std::string& ylabel,
          const std::string& title, const std::vector<double>& xticks) {
  os << "<rect x='" << num(p.x0) << "' y='" << num(p.y0) << "' width='" << num(p.w)
     << "' height='" << num(p.h) << "' fill='none' stroke='black'/>\n";
  for (double x : xticks) {
    os << "<line x1='" << num(p.px(x)) << "' y1='" << num(p.y0 + p.h) << "' x2='" << num(p.px(x))
       << "' y2='" << num(p.y0 + p.h + 5) << "' stroke='black'/>\n";
    os << "<text x='" << num(p.px(x)) << "' y='" << num(p.y0 + p.h + 18)
       << "' font-size='11' text-anchor='middle'>" << tick_label(x) << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double y = p.ylo + (p.yhi - p.ylo) * i / 4.0;
    os << "<line x1='" << num(p.x0 - 5) << "' y1='" << num(p.py(y)) << "' x2='" << num(p.x0)
       << "' y2='" << num(p.py(y)) << "' stroke='black'/>\n";
    os << "<text x='" << num(p.x0 - 8) << "' y='" << num(p.py(y) + 4)
       << "' font-size='11' text-anchor='end'>" << tick_label(y) << "</text>\n";
  }
  os << "<text x='" << num(p.x0 + p.w / 2) << "' y='" << num(p.y0 + p.h + 36)
     << "' font-size='12' text-anchor='middle'>" << escape(xlabel) << "</text>\n";
  os << "<text transform='translate(" << num(p.x0 - 48) << ',' << num(p.y0 + p.h / 2)
     << ") rotate(-90)' font-size='12' text-anchor='middle'>" << escape(ylabel) << "</text>\n";
  if (!title.empty())
    os << "<text x='" << num(p.x0 + p.w / 2) << "' y='" << num(p.y0 - 10)
       << "' font-size='13' text-anchor='middle'>" << escape(title) << "</text>\n";
}

std::string open_svg(double width, double height) {
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << num(width) << "' height='"
     << num(height) << "' viewBox='0 0 " << num(width) << ' ' << num(height) << "'>\n"
     << "<rect width='100%' height='100%' fill='white'/>\n";
  return os.str();
}

}  // namespace

std::string diagram_svg(const PersistenceDiagram& pd, const std::string& title) {
  std::ostringstream os;
  os << open_svg(420, 420);
  const double cap = pd.death_cap;
  Panel p{70, 40, 320, 320, 0, cap, 0, cap};
  axes(os, p, "birth", "death", title, {0, cap / 4, cap / 2, 3 * cap / 4, cap});
  os << "<line x1='" << num(p.px(0)) << "' y1='" << num(p.py(0)) << "' x2='" << num(p.px(cap))
     << "' y2='" << num(p.py(cap)) << "' stroke='gray' stroke-dasharray='4 3'/>\n";
  for (const auto& f : pd.features) {
    const char* color = kDimColor[std::clamp(f.dim, 0, 2)];
    os << "<circle cx='" << num(p.px(f.birth)) << "' cy='" << num(p.py(f.death)) << "' r='3.5' ";
    if (f.essential)
      os << "fill='none' stroke='" << color << "'/>\n";
    else
      os << "fill='" << color << "' fill-opacity='0.8'/>\n";
  }
  for (int k = 0; k <= pd.max_dim && k < 3; ++k) {
    const double y = 56 + 16 * k;
    os << "<circle cx='" << num(p.x0 + p.w - 50) << "' cy='" << num(y) << "' r='4' fill='"
       << kDimColor[k] << "'/>\n<text x='" << num(p.x0 + p.w - 40) << "' y='" << num(y + 4)
       << "' font-size='11'>H" << k << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string sweep_svg(const SweepResult& r) {
  std::ostringstream os;
  os << open_svg(1080, 360);
  const double xlo = r.snr_grid.front(), xhi = r.snr_grid.back();
  for (int k = 0; k < 3; ++k) {
    const auto values = component(r.means, k);
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    pad_range(lo, hi);
    Panel p{80.0 + 355.0 * k, 40, 260, 250, xlo, xhi == xlo ? xlo * 10 : xhi, lo, hi, true};
    if (xhi == xlo) p.xlo = xlo / 10;
    axes(os, p, "SNR", "mean total persistence", "H" + std::to_string(k), r.snr_grid);
    os << "<polyline fill='none' stroke='" << kDimColor[k] << "' stroke-width='2' points='";
    for (std::size_t i = 0; i < values.size(); ++i)
      os << (i ? " " : "") << num(p.px(r.snr_grid[i])) << ',' << num(p.py(values[i]));
    os << "'/>\n";
    for (std::size_t i = 0; i < values.size(); ++i)
      os << "<circle cx='" << num(p.px(r.snr_grid[i])) << "' cy='" << num(p.py(values[i]))
         << "' r='3' fill='" << kDimColor[k] << "'/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string bootstrap_svg(const BootstrapResult& r, int max_dim) {
  const int panels = std::clamp(max_dim, 0, 2) + 1;
  std::ostringstream os;
  os << open_svg(60 + 330.0 * panels, 360);
  for (int k = 0; k < panels; ++k) {
    const FiveNumber s[] = {five_number(component(r.boot1, k)),
                            five_number(component(r.boot2, k))};
    double lo = std::min(s[0].min, s[1].min), hi = std::max(s[0].max, s[1].max);
    pad_range(lo, hi);
    Panel p{80.0 + 330.0 * k, 40, 240, 250, 0, 3, lo, hi};
    axes(os, p, "group", "bootstrap mean total persistence", "H" + std::to_string(k), {1, 2});
    for (int g = 0; g < 2; ++g) {
      const double cx = p.px(g + 1), half = 30;
      auto hline = [&](double y, double x1, double x2) {
        os << "<line x1='" << num(x1) << "' y1='" << num(p.py(y)) << "' x2='" << num(x2)
           << "' y2='" << num(p.py(y)) << "' stroke='black'/>\n";
      };
      os << "<line x1='" << num(cx) << "' y1='" << num(p.py(s[g].min)) << "' x2='" << num(cx)
         << "' y2='" << num(p.py(s[g].max)) << "' stroke='black'/>\n";
      os << "<rect x='" << num(cx - half) << "' y='" << num(p.py(s[g].q3)) << "' width='"
         << num(2 * half) << "' height='" << num(p.py(s[g].q1) - p.py(s[g].q3)) << "' fill='"
         << kGroupColor[g] << "' stroke='black'/>\n";
      hline(s[g].median, cx - half, cx + half);
      hline(s[g].min, cx - half / 2, cx + half / 2);
      hline(s[g].max, cx - half / 2, cx + half / 2);
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace toposim
