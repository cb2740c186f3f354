#include <sliderule/tickgen.hpp>

#include <sliderule/errors.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <tuple>
#include <utility>

namespace sliderule {

void TickPolicy::validate() const {
  if (!(min_gap_mm > 0) || !std::isfinite(min_gap_mm))
    throw InvalidInput(fmt::format("min_gap_mm must be positive, got {}", min_gap_mm));
  if (!(min_label_gap_mm > min_gap_mm) || !std::isfinite(min_label_gap_mm))
    throw InvalidInput(fmt::format("min_label_gap_mm ({}) must exceed min_gap_mm ({})",
                                   min_label_gap_mm, min_gap_mm));
  if (max_levels < 1 || max_levels > 3)
    throw InvalidInput(fmt::format("max_levels must be 1, 2 or 3, got {}", max_levels));
  if (!(font_size_mm > 0) || !std::isfinite(font_size_mm))
    throw InvalidInput(fmt::format("font_size_mm must be positive, got {}", font_size_mm));
}

double label_width_mm(std::string_view label, double font_size_mm) {
  // count UTF-8 code points
  const auto chars = std::count_if(label.begin(), label.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  });
  return 0.6 * font_size_mm * static_cast<double>(chars);
}

std::string format_tick_value(double value) {
  for (int d = 0; d <= 12; ++d) {
    const double scale = std::pow(10.0, d);
    const double rounded = std::round(value * scale) / scale;
    if (std::abs(rounded - value) <= 1e-9 * std::max(std::abs(value), 1e-12)) {
      std::string s = fmt::format("{:.{}f}", value, d);
      if (s == "-0") s = "0";
      return s;
    }
  }
  return fmt::format("{:.6g}", value);
}

namespace {

double pow10_exact(int e) {
  double p = 1.0;
  for (int i = 0; i < e; ++i) p *= 10.0;
  return p;
}

/// m * 10^e with m in {1, 2, 5}.
struct NiceStep {
  int m = 1;
  int e = 0;

  double value() const { return at(1); }
  // Grid values are (k*m)/10^-e, a correctly rounded quotient of integers, so
  // the same rational yields the same double from every step.
  double at(long long k) const {
    const double km = static_cast<double>(k * m);
    return e >= 0 ? km * pow10_exact(e) : km / pow10_exact(-e);
  }
  NiceStep finer() const {
    switch (m) {
      case 5: return {2, e};
      case 2: return {1, e};
      default: return {5, e - 1};
    }
  }
  bool divides(const NiceStep& big) const {
    if (big.e < e) return false;
    if (big.e - e > 15) return false;
    const long long n = static_cast<long long>(big.m) * static_cast<long long>(pow10_exact(big.e - e));
    return n % m == 0;
  }
  bool operator==(const NiceStep&) const = default;
};

constexpr long long kMaxGridPoints = 20000;
constexpr int kMaxLadderDepth = 24;

/// Grid values k*step inside [lo, hi] that also lie in the scale range.
std::vector<double> grid(const ScaleSpec& scale, const NiceStep& step, double lo, double hi) {
  std::vector<double> out;
  const double s = step.value();
  lo = std::max(lo, scale.x_min());
  hi = std::min(hi, scale.x_max());
  if (lo > hi) return out;
  const auto kmin = static_cast<long long>(std::ceil(lo / s - 1e-9));
  const auto kmax = static_cast<long long>(std::floor(hi / s + 1e-9));
  if (kmax - kmin > kMaxGridPoints) return out;
  for (long long k = kmin; k <= kmax; ++k) {
    const double v = step.at(k);
    if (scale.contains(v) && v >= lo - 1e-12 * std::abs(lo) && v <= hi + 1e-12 * std::abs(hi))
      out.push_back(v);
  }
  return out;
}

bool gaps_ok(const ScaleSpec& scale, const std::vector<double>& values, double min_gap) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double gap = std::abs(scale.placement(values[i]) - scale.placement(values[i - 1]));
    if (gap < min_gap) return false;
  }
  return true;
}

/// Finest step below `major` (nested in it) whose marks inside [lo, hi] keep
/// every adjacent gap >= min_gap.
std::optional<NiceStep> finest_admissible(const ScaleSpec& scale, NiceStep major, double lo,
                                          double hi, double min_gap) {
  std::optional<NiceStep> best;
  NiceStep step = major;
  for (int depth = 0; depth < kMaxLadderDepth; ++depth) {
    step = step.finer();
    if (!step.divides(major)) continue;
    const double span = std::min(hi, scale.x_max()) - std::max(lo, scale.x_min());
    if (span / step.value() > kMaxGridPoints) break;
    const auto values = grid(scale, step, lo, hi);
    if (!gaps_ok(scale, values, min_gap)) break;
    best = step;
  }
  return best;
}

/// Intermediate level between a major step and the finest admissible one.
std::optional<NiceStep> medium_step(const NiceStep& major, const NiceStep& fine) {
  const NiceStep tenth{major.m, major.e - 1};
  const std::optional<NiceStep> half =
      major.m == 1 ? std::optional<NiceStep>{NiceStep{5, major.e - 1}}
      : major.m == 2 ? std::optional<NiceStep>{NiceStep{1, major.e}}
                     : std::nullopt;
  const std::optional<NiceStep> fifth =
      major.m == 1 ? std::optional<NiceStep>{NiceStep{2, major.e - 1}}
      : major.m == 5 ? std::optional<NiceStep>{NiceStep{1, major.e}}
                     : std::nullopt;
  for (const auto& cand : {std::optional<NiceStep>{tenth}, half, fifth}) {
    if (cand && cand->value() > fine.value() * (1 + 1e-9) && fine.divides(*cand)) return cand;
  }
  return std::nullopt;
}

int niceness_priority(double value, const NiceStep& step) {
  const double k = std::round(value / step.value());
  const auto ki = static_cast<long long>(k);
  if (ki % 10 == 0) return 0;
  if (ki % 5 == 0) return 1;
  if (ki % 2 == 0) return 2;
  return 3;
}

/// (significant digits, last-digit class): 5 beats even beats odd.
std::pair<int, int> label_roundness(std::string_view text) {
  std::string digits;
  for (char c : text)
    if (c >= '0' && c <= '9') digits += c;
  const auto first = digits.find_first_not_of('0');
  if (first == std::string::npos) return {0, 0};
  const auto last = digits.find_last_not_of('0');
  const int d = digits[last] - '0';
  return {static_cast<int>(last - first + 1), d == 5 ? 0 : d % 2 == 0 ? 1 : 2};
}

struct Candidate {
  double value = 0.0;
  int level = 0;
  int priority = 3;
  std::optional<std::string> label;  // preset label (special values)
};

class Placer {
 public:
  explicit Placer(const TickPolicy& policy) : policy_(policy) {}

  bool tick_fits(double pos) const {
    auto next = ticks_.lower_bound(pos);
    if (next != ticks_.end() && next->first - pos < policy_.min_gap_mm) return false;
    if (next != ticks_.begin() && pos - std::prev(next)->first < policy_.min_gap_mm)
      return false;
    return true;
  }

  bool label_fits(double pos, std::string_view text) const {
    const double half = label_width_mm(text, policy_.font_size_mm) / 2.0;
    auto next = labels_.lower_bound(pos);
    const auto clear = [&](double other_pos, double other_half) {
      const double d = std::abs(other_pos - pos);
      return d >= policy_.min_label_gap_mm && d >= half + other_half;
    };
    if (next != labels_.end() && !clear(next->first, next->second)) return false;
    if (next != labels_.begin() && !clear(std::prev(next)->first, std::prev(next)->second))
      return false;
    return true;
  }

  void add_tick(double pos) { ticks_.emplace(pos, 0); }
  void add_label(double pos, std::string_view text) {
    labels_.emplace(pos, label_width_mm(text, policy_.font_size_mm) / 2.0);
  }

 private:
  const TickPolicy& policy_;
  std::map<double, int> ticks_;
  std::map<double, double> labels_;
};

void collect_uniform(const ScaleSpec& scale, const TickPolicy& policy,
                     std::vector<Candidate>& majors, std::vector<Candidate>& minors) {
  const double lo = scale.x_min();
  const double hi = scale.x_max();
  const double span = hi - lo;
  NiceStep major{1, static_cast<int>(std::ceil(std::log10(span)))};
  while (span / major.finer().value() <= 10.0) major = major.finer();

  for (double v : grid(scale, major, lo, hi))
    majors.push_back({v, 0, niceness_priority(v, major), std::nullopt});
  if (policy.max_levels < 2) return;

  const auto fine = finest_admissible(scale, major, lo, hi, policy.min_gap_mm);
  if (!fine) return;
  std::optional<NiceStep> medium;
  if (policy.max_levels >= 3) medium = medium_step(major, *fine);
  if (medium)
    for (double v : grid(scale, *medium, lo, hi)) minors.push_back({v, 1, 0, std::nullopt});
  for (double v : grid(scale, *fine, lo, hi))
    minors.push_back({v, medium ? 2 : 1, 0, std::nullopt});
}

void collect_decades(const ScaleSpec& scale, const TickPolicy& policy,
                     std::vector<Candidate>& majors, std::vector<Candidate>& minors) {
  const int k_lo = static_cast<int>(std::floor(std::log10(scale.x_min())));
  const int k_hi = static_cast<int>(std::floor(std::log10(scale.x_max())));
  for (int k = k_lo; k <= k_hi; ++k) {
    const NiceStep major{1, k};
    for (int j = 1; j <= 10; ++j) {
      const double v = major.at(j);
      if (scale.contains(v) && v >= scale.x_min() && v <= scale.x_max())
        majors.push_back({v, 0, j == 1 || j == 10 ? 0 : j == 5 ? 1 : j == 2 ? 2 : 3, std::nullopt});
    }
    if (policy.max_levels < 2) continue;
    for (int j = 1; j < 10; ++j) {
      const double a = major.at(j);
      const double b = major.at(j + 1);
      if (b < scale.x_min() || a > scale.x_max()) continue;
      const auto fine = finest_admissible(scale, major, a, b, policy.min_gap_mm);
      if (!fine) continue;
      std::optional<NiceStep> medium;
      if (policy.max_levels >= 3) medium = medium_step(major, *fine);
      if (medium)
        for (double v : grid(scale, *medium, a, b)) minors.push_back({v, 1, 0, std::nullopt});
      for (double v : grid(scale, *fine, a, b))
        minors.push_back({v, medium ? 2 : 1, 0, std::nullopt});
    }
  }
}

bool decade_layout(const ScaleSpec& scale) {
  const ScaleFunction& f = scale.function();
  const bool log_like = f.kind() == FunctionKind::Log || f.kind() == FunctionKind::LogLog ||
                        (f.kind() == FunctionKind::Power && f.parameter() < 0);
  return log_like && scale.x_min() > 0 && scale.x_max() / scale.x_min() >= 10.0;
}

}  // namespace

TickSet generate_ticks(const ScaleSpec& scale, const TickPolicy& policy) {
  policy.validate();
  TickSet out;
  out.scale_name = scale.name();

  Placer placer(policy);
  if (scale.function().kind() == FunctionKind::Power && scale.function().parameter() < 0 &&
      scale.natural_origin()) {
    out.origin_label = EndpointLabel{0.0, "∞"};
    placer.add_label(0.0, out.origin_label->label);
  }

  std::vector<Candidate> majors;
  std::vector<Candidate> minors;
  for (double v : policy.special_values) {
    if (!scale.contains(v)) {
      out.warnings.push_back(fmt::format("special value {} is outside the scale range", v));
      continue;
    }
    majors.push_back({v, 0, -1, fmt::format("{:.4g}", v)});
  }
  if (decade_layout(scale))
    collect_decades(scale, policy, majors, minors);
  else
    collect_uniform(scale, policy, majors, minors);

  // Majors: best priority first; a major whose label cannot be placed is
  // demoted to a medium tick.
  std::stable_sort(majors.begin(), majors.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.priority, a.value) < std::tie(b.priority, b.value);
  });

  std::map<double, Tick> accepted;  // keyed by value
  for (const Candidate& c : majors) {
    if (accepted.contains(c.value)) continue;
    const double pos = scale.position(c.value);
    if (!placer.tick_fits(pos)) continue;
    const std::string text = c.label.value_or(format_tick_value(c.value));
    if (!placer.label_fits(pos, text)) {
      minors.push_back({c.value, 1, c.priority, std::nullopt});
      continue;
    }
    placer.add_tick(pos);
    placer.add_label(pos, text);
    accepted.emplace(c.value, Tick{c.value, pos, 0, text});
  }

  std::stable_sort(minors.begin(), minors.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.level, a.priority, a.value) < std::tie(b.level, b.priority, b.value);
  });
  for (const Candidate& c : minors) {
    if (accepted.contains(c.value)) continue;
    const double pos = scale.position(c.value);
    if (!placer.tick_fits(pos)) continue;
    placer.add_tick(pos);
    accepted.emplace(c.value, Tick{c.value, pos, c.level, std::nullopt});
  }

  for (const auto& [value, tick] : accepted) out.ticks.push_back(tick);
  std::sort(out.ticks.begin(), out.ticks.end(),
            [](const Tick& a, const Tick& b) { return a.pos_mm < b.pos_mm; });

  // Medium ticks take labels greedily, roundest values first, so a crowded
  // interval reads 2, 2.5, 3 rather than 2, 2.3, 2.6.
  std::vector<Tick*> medium;
  for (Tick& t : out.ticks)
    if (t.level == 1) medium.push_back(&t);
  std::stable_sort(medium.begin(), medium.end(), [](const Tick* a, const Tick* b) {
    return label_roundness(format_tick_value(a->value)) <
           label_roundness(format_tick_value(b->value));
  });
  for (Tick* t : medium) {
    const std::string text = format_tick_value(t->value);
    if (placer.label_fits(t->pos_mm, text)) {
      placer.add_label(t->pos_mm, text);
      t->label = text;
    }
  }

  if (out.ticks.size() < 2) {
    out.warnings.push_back("range too compressed for tick subdivision; endpoints only");
    out.ticks.clear();
    const Tick first{scale.x_min(), scale.position(scale.x_min()), 0,
                     format_tick_value(scale.x_min())};
    const Tick last{scale.x_max(), scale.position(scale.x_max()), 0,
                    format_tick_value(scale.x_max())};
    out.ticks.push_back(first);
    const double gap = std::abs(last.pos_mm - first.pos_mm);
    const double half_widths = (label_width_mm(*first.label, policy.font_size_mm) +
                                label_width_mm(*last.label, policy.font_size_mm)) / 2.0;
    if (gap >= policy.min_gap_mm && gap >= policy.min_label_gap_mm && gap >= half_widths)
      out.ticks.push_back(last);
    std::sort(out.ticks.begin(), out.ticks.end(),
              [](const Tick& a, const Tick& b) { return a.pos_mm < b.pos_mm; });
  }
  return out;
}

DensestGap densest_gap(const TickSet& set) {
  if (set.ticks.size() < 2) throw InvalidInput("densest gap needs at least two ticks");
  std::vector<const Tick*> order;
  order.reserve(set.ticks.size());
  for (const Tick& t : set.ticks) order.push_back(&t);
  std::sort(order.begin(), order.end(),
            [](const Tick* a, const Tick* b) { return a->pos_mm < b->pos_mm; });
  DensestGap best{order[0]->value, order[1]->value, order[1]->pos_mm - order[0]->pos_mm};
  for (std::size_t i = 2; i < order.size(); ++i) {
    const double gap = order[i]->pos_mm - order[i - 1]->pos_mm;
    if (gap < best.gap_mm) best = {order[i - 1]->value, order[i]->value, gap};
  }
  return best;
}

}  // namespace sliderule
