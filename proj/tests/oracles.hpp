#pragma once

// Independent reference implementations used as test oracles.

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "duplex/duplex.hpp"

namespace oracle {

using duplex::Interval;
using duplex::Millis;

inline std::string source_path(const std::string& rel) { return std::string(DUPLEX_SOURCE_DIR) + "/" + rel; }

// Runs of `true` in a per-millisecond boolean grid starting at `origin`.
inline std::vector<Interval> runs(const std::vector<bool>& grid, Millis origin) {
  std::vector<Interval> out;
  std::size_t i = 0;
  while (i < grid.size()) {
    if (!grid[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < grid.size() && grid[j]) ++j;
    out.emplace_back(origin + static_cast<Millis>(i), origin + static_cast<Millis>(j));
    i = j;
  }
  return out;
}

inline std::vector<bool> speaking(const duplex::ChannelTrack& track, const Interval& span) {
  std::vector<bool> g(static_cast<std::size_t>(span.duration()), false);
  for (const auto& s : track.segments) {
    for (Millis t = s.interval.start(); t < s.interval.end(); ++t) g[static_cast<std::size_t>(t - span.start())] = true;
  }
  return g;
}

inline std::vector<Interval> brute_overlaps(const duplex::DialogueTimeline& tl) {
  const auto a = speaking(tl.track(0), tl.span());
  const auto b = speaking(tl.track(1), tl.span());
  std::vector<bool> both(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) both[i] = a[i] && b[i];
  return runs(both, tl.span().start());
}

inline std::vector<Interval> brute_mutual_silences(const duplex::DialogueTimeline& tl) {
  const auto a = speaking(tl.track(0), tl.span());
  const auto b = speaking(tl.track(1), tl.span());
  std::vector<bool> none(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) none[i] = !a[i] && !b[i];
  return runs(none, tl.span().start());
}

inline std::vector<Interval> brute_silences(const duplex::ChannelTrack& track, const Interval& span) {
  auto g = speaking(track, span);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = !g[i];
  return runs(g, span.start());
}

/// Random two-track timeline: at most `max_segments` segments in total, span at most `max_span` ms.
inline duplex::DialogueTimeline random_timeline(std::mt19937_64& rng, int max_segments = 20, Millis max_span = 60000) {
  std::uniform_int_distribution<Millis> span_end(1000, max_span);
  const Millis end = span_end(rng);
  std::vector<duplex::SpeechSegment> tracks[2];
  const int total = static_cast<int>(rng() % static_cast<unsigned>(max_segments + 1));
  const int first = total == 0 ? 0 : static_cast<int>(rng() % static_cast<unsigned>(total + 1));
  const int counts[2] = {first, total - first};
  for (int k = 0; k < 2; ++k) {
    // Choose 2n distinct cut points and pair them up.
    std::vector<Millis> cuts;
    std::uniform_int_distribution<Millis> pos(0, end);
    while (static_cast<int>(cuts.size()) < 2 * counts[k]) {
      const Millis c = pos(rng);
      if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); i += 2) {
      tracks[k].push_back({Interval(cuts[i], cuts[i + 1]), std::nullopt});
    }
  }
  return duplex::DialogueTimeline::create({"User", tracks[0]}, {"Assistant", tracks[1]},
                                          {duplex::Role::User, duplex::Role::System}, Interval(0, end + 1));
}

struct TallyReport {
  double accuracy = 0;
  double macro_f1 = 0;
  std::map<int, double> f1;
};

// Counts true/false positives per class by scanning the item list once per class.
inline TallyReport brute_metrics(const std::vector<int>& pred, const std::vector<int>& gold, const std::vector<int>& classes) {
  TallyReport r;
  int hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == gold[i];
  r.accuracy = static_cast<double>(hits) / static_cast<double>(pred.size());
  double sum = 0;
  for (int c : classes) {
    int tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (pred[i] == c && gold[i] == c) ++tp;
      if (pred[i] == c && gold[i] != c) ++fp;
      if (pred[i] != c && gold[i] == c) ++fn;
    }
    // F1 = 2TP / (2TP + FP + FN), zero when the class never occurs on either side.
    const double f1 = tp == 0 ? 0.0 : 2.0 * tp / (2.0 * tp + fp + fn);
    r.f1[c] = f1;
    sum += f1;
  }
  r.macro_f1 = sum / static_cast<double>(classes.size());
  return r;
}

inline double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double population_std(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace oracle
