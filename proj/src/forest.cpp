#include "metaparadox/forest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace metaparadox {

namespace {

std::string format_double(double value, std::chars_format fmt, int precision) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, fmt,
                                       precision);
  return std::string(buf, ptr);
}

std::string fixed(double value, int decimals) {
  return format_double(value, std::chars_format::fixed, decimals);
}

std::string sig3(double value) {
  return format_double(value, std::chars_format::general, 3);
}

std::string format_pvalue(double p) {
  if (p != 0.0 && p < 0.001) {
    return format_double(p, std::chars_format::scientific, 2);
  }
  return fixed(p, 3);
}

std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string display_label(const ForestRow& row) {
  return row.label.empty() ? "(unnamed)" : row.label;
}

// Track coordinates: identity for mean differences, natural log for odds
// ratios (so a multiplicative axis renders evenly spaced).
struct Axis {
  double lo;
  double hi;
  double null_pos;
  bool log_scale;

  double position(double display_value) const {
    return log_scale ? std::log(display_value) : display_value;
  }
};

Axis make_axis(std::span<const ForestRow> rows, EffectMeasure measure) {
  const bool log_scale = measure == EffectMeasure::OddsRatio;
  // Null position is 0 on both track scales (log 1 = 0 for odds ratios).
  Axis axis{0.0, 0.0, 0.0, log_scale};
  double lo = axis.null_pos;
  double hi = axis.null_pos;
  for (const ForestRow& row : rows) {
    lo = std::min(lo, axis.position(row.display_ci.lo));
    hi = std::max(hi, axis.position(row.display_ci.hi));
  }
  double pad = 0.05 * (hi - lo);
  if (pad <= 0.0) pad = 1.0;
  axis.lo = lo - pad;
  axis.hi = hi + pad;
  return axis;
}

std::string footer_lines(std::span<const ForestRow> rows) {
  std::string out;
  for (const ForestRow& row : rows) {
    if (!row.is_pooled) continue;
    out += "model: " + row.model_tag + "\n";
    if (row.het) {
      const HeterogeneityStats& h = *row.het;
      out += "heterogeneity: Q = " + fixed(h.q, 2) + " (df " +
             std::to_string(h.df) + "), p = " + format_pvalue(h.p_q.value()) +
             ", I² = " + std::to_string(static_cast<long>(std::lround(h.i2))) +
             "%, τ² = " + sig3(h.tau2) + "\n";
    }
  }
  return out;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<ForestRow> make_forest_rows(std::span<const StudyEffect> studies,
                                        const PooledResult& pooled,
                                        EffectMeasure measure) {
  if (studies.size() != pooled.weights.size()) {
    throw std::invalid_argument(
        "pooled result does not match the study list");
  }
  const bool log_scale = measure == EffectMeasure::OddsRatio;
  std::vector<ForestRow> rows;
  rows.reserve(studies.size() + 1);
  for (std::size_t i = 0; i < studies.size(); ++i) {
    const StudyEffect& s = studies[i];
    ConfidenceInterval ci = ci_of(s.y, std::sqrt(s.v), pooled.level);
    double estimate = s.y;
    if (log_scale) {
      estimate = std::exp(estimate);
      ci = ConfidenceInterval(std::exp(ci.lo), std::exp(ci.hi), ci.level);
    }
    rows.push_back(ForestRow{s.label, estimate, ci,
                             pooled.weights[i] * 100.0, false, {}, {}});
  }
  const DisplayEffect display = to_display_scale(pooled, measure);
  const std::string tag = pooled.model == Model::FixedEffect
                              ? "fixed effect (inverse variance)"
                              : "random effects (DerSimonian-Laird)";
  rows.push_back(ForestRow{"pooled", display.estimate, display.ci, 100.0,
                           true, tag, pooled.het});
  return rows;
}

std::string render_forest_text(std::span<const ForestRow> rows,
                               const TextForestOptions& options) {
  if (rows.empty()) {
    throw std::invalid_argument("forest plot needs at least one row");
  }
  if (options.width < 60) {
    throw std::invalid_argument("width too small: need at least 60 columns");
  }

  std::size_t label_width = 5;  // "study"
  for (const ForestRow& row : rows) {
    label_width = std::max(label_width, display_label(row).size());
  }
  // label  estimate [lo, hi]  weight  track
  const std::size_t prefix = label_width + 2 + 8 + 1 + 18 + 1 + 5 + 2;
  if (options.width < prefix + 20) {
    throw std::invalid_argument(
        "width too small: labels leave fewer than 20 track columns");
  }
  const std::size_t track_width = options.width - prefix;

  const Axis axis = make_axis(rows, options.measure);
  const auto column = [&](double pos) -> std::size_t {
    const double t = (pos - axis.lo) / (axis.hi - axis.lo);
    const double c = t * static_cast<double>(track_width - 1);
    return static_cast<std::size_t>(
        std::clamp(std::lround(c), 0L,
                   static_cast<long>(track_width - 1)));
  };
  const std::size_t null_col = column(axis.null_pos);

  const std::string level_text =
      std::to_string(static_cast<long>(std::lround(
          rows.front().display_ci.level.value() * 100.0)));

  std::string out;
  out += pad_right("study", label_width) + "  " + pad_left("estimate", 8) +
         " " + pad_right("[" + level_text + "% CI]", 18) + " " +
         pad_left("wt", 5) + "\n";

  for (const ForestRow& row : rows) {
    std::vector<char> track(track_width, ' ');
    track[null_col] = '|';
    const std::size_t cl = column(axis.position(row.display_ci.lo));
    const std::size_t cr = column(axis.position(row.display_ci.hi));
    const std::size_t ce = column(axis.position(row.display_estimate));
    for (std::size_t c = cl; c <= cr; ++c) {
      track[c] = row.is_pooled ? '=' : '-';
    }
    track[cl] = row.is_pooled ? '<' : '[';
    track[cr] = row.is_pooled ? '>' : ']';

    std::string line = pad_right(display_label(row), label_width) + "  " +
                       pad_left(fixed(row.display_estimate, 2), 8) + " " +
                       pad_right("[" + fixed(row.display_ci.lo, 2) + ", " +
                                     fixed(row.display_ci.hi, 2) + "]",
                                 18) +
                       " ";
    if (row.is_pooled) {
      line += pad_left("", 5);
    } else {
      line += pad_left(
          std::to_string(static_cast<long>(std::lround(row.weight_percent))) +
              "%",
          5);
    }
    line += "  ";
    std::string track_str(track.begin(), track.end());
    // The estimate marker goes on top; UTF-8 diamond for the pooled row.
    if (row.is_pooled) {
      track_str.replace(ce, 1, "◆");
    } else {
      track_str[ce] = 'o';
    }
    line += track_str;
    out += line + "\n";
  }

  // Axis ruler with the null marker, then positioned tick labels.
  std::string ruler(track_width, '-');
  ruler.front() = '+';
  ruler.back() = '+';
  ruler[null_col] = '|';
  out += std::string(prefix, ' ') + ruler + "\n";

  const std::string lo_text =
      axis.log_scale ? sig3(std::exp(axis.lo)) : fixed(axis.lo, 2);
  const std::string hi_text =
      axis.log_scale ? sig3(std::exp(axis.hi)) : fixed(axis.hi, 2);
  const std::string null_text = axis.log_scale ? "1" : "0";
  std::string labels(track_width, ' ');
  labels.replace(0, lo_text.size(), lo_text);
  if (hi_text.size() <= track_width) {
    labels.replace(track_width - hi_text.size(), hi_text.size(), hi_text);
  }
  std::size_t null_at = null_col >= null_text.size() / 2
                            ? null_col - null_text.size() / 2
                            : 0;
  null_at = std::min(null_at, track_width - null_text.size());
  labels.replace(null_at, null_text.size(), null_text);
  out += std::string(prefix, ' ') + labels + "\n";

  out += footer_lines(rows);
  return out;
}

std::string render_forest_svg(std::span<const ForestRow> rows,
                              const SvgForestOptions& options) {
  if (rows.empty()) {
    throw std::invalid_argument("forest plot needs at least one row");
  }
  if (options.width < 400) {
    throw std::invalid_argument("svg width must be at least 400 pixels");
  }

  const double left = 150.0;
  const double right = 170.0;
  const double top = 24.0;
  const double row_height = 24.0;
  const double width = static_cast<double>(options.width);
  const double plot_width = width - left - right;
  const double plot_bottom = top + row_height * static_cast<double>(rows.size());
  const double height = plot_bottom + 64.0;

  const Axis axis = make_axis(rows, options.measure);
  const auto x_of = [&](double pos) {
    return left + (pos - axis.lo) / (axis.hi - axis.lo) * plot_width;
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         fixed(width, 0) + "\" height=\"" + fixed(height, 0) +
         "\" viewBox=\"0 0 " + fixed(width, 0) + " " + fixed(height, 0) +
         "\" font-family=\"monospace\" font-size=\"12\">\n";
  svg += "<rect width=\"" + fixed(width, 0) + "\" height=\"" +
         fixed(height, 0) + "\" fill=\"white\"/>\n";

  // Null line across the plot area.
  const double null_x = x_of(axis.null_pos);
  svg += "<line x1=\"" + fixed(null_x, 2) + "\" y1=\"" + fixed(top, 2) +
         "\" x2=\"" + fixed(null_x, 2) + "\" y2=\"" + fixed(plot_bottom, 2) +
         "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ForestRow& row = rows[i];
    const double cy = top + row_height * (static_cast<double>(i) + 0.5);
    const double x_lo = x_of(axis.position(row.display_ci.lo));
    const double x_hi = x_of(axis.position(row.display_ci.hi));
    const double x_est = x_of(axis.position(row.display_estimate));

    svg += "<text x=\"8\" y=\"" + fixed(cy + 4.0, 2) + "\">" +
           xml_escape(display_label(row)) + "</text>\n";

    if (row.is_pooled) {
      // Diamond spanning the pooled interval.
      svg += "<polygon points=\"" + fixed(x_lo, 2) + "," + fixed(cy, 2) + " " +
             fixed(x_est, 2) + "," + fixed(cy - 7.0, 2) + " " +
             fixed(x_hi, 2) + "," + fixed(cy, 2) + " " + fixed(x_est, 2) +
             "," + fixed(cy + 7.0, 2) + "\" fill=\"#2b4b77\"/>\n";
    } else {
      svg += "<line x1=\"" + fixed(x_lo, 2) + "\" y1=\"" + fixed(cy, 2) +
             "\" x2=\"" + fixed(x_hi, 2) + "\" y2=\"" + fixed(cy, 2) +
             "\" stroke=\"black\"/>\n";
      const double side =
          5.0 + 9.0 * std::sqrt(std::clamp(row.weight_percent, 0.0, 100.0) /
                                100.0);
      svg += "<rect x=\"" + fixed(x_est - side / 2.0, 2) + "\" y=\"" +
             fixed(cy - side / 2.0, 2) + "\" width=\"" + fixed(side, 2) +
             "\" height=\"" + fixed(side, 2) + "\" fill=\"#444444\"/>\n";
    }

    const std::string summary = fixed(row.display_estimate, 2) + " [" +
                                fixed(row.display_ci.lo, 2) + ", " +
                                fixed(row.display_ci.hi, 2) + "]";
    svg += "<text x=\"" + fixed(width - right + 10.0, 2) + "\" y=\"" +
           fixed(cy + 4.0, 2) + "\">" + summary + "</text>\n";
  }

  // Axis with ticks at the ends and the null.
  svg += "<line x1=\"" + fixed(left, 2) + "\" y1=\"" + fixed(plot_bottom, 2) +
         "\" x2=\"" + fixed(left + plot_width, 2) + "\" y2=\"" +
         fixed(plot_bottom, 2) + "\" stroke=\"black\"/>\n";
  const std::string lo_text =
      axis.log_scale ? sig3(std::exp(axis.lo)) : sig3(axis.lo);
  const std::string hi_text =
      axis.log_scale ? sig3(std::exp(axis.hi)) : sig3(axis.hi);
  const std::string null_text = axis.log_scale ? "1" : "0";
  const struct {
    double x;
    const std::string& text;
  } ticks[] = {{left, lo_text}, {null_x, null_text},
               {left + plot_width, hi_text}};
  for (const auto& tick : ticks) {
    svg += "<line x1=\"" + fixed(tick.x, 2) + "\" y1=\"" +
           fixed(plot_bottom, 2) + "\" x2=\"" + fixed(tick.x, 2) + "\" y2=\"" +
           fixed(plot_bottom + 5.0, 2) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed(tick.x, 2) + "\" y=\"" +
           fixed(plot_bottom + 18.0, 2) + "\" text-anchor=\"middle\">" +
           tick.text + "</text>\n";
  }

  double footer_y = plot_bottom + 36.0;
  std::string footer = footer_lines(rows);
  std::size_t start = 0;
  while (start < footer.size()) {
    std::size_t end = footer.find('\n', start);
    if (end == std::string::npos) end = footer.size();
    svg += "<text x=\"8\" y=\"" + fixed(footer_y, 2) + "\">" +
           xml_escape(footer.substr(start, end - start)) + "</text>\n";
    footer_y += 16.0;
    start = end + 1;
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace metaparadox
