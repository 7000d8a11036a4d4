// Copyright 2026, The radar-moseve Authors
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

#include "moseve/sim/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "moseve/errors.hpp"

namespace moseve::sim {

namespace fs = std::filesystem;

namespace {

constexpr const char* kPointsHeader = "frame_idx,point_idx,x,y,z,v,label";
constexpr const char* kEgoHeader = "frame_idx,timestamp,ego_v";
constexpr const char* kTracksHeader = "track_id,class,extent,frame_idx,x,y,z,vx,vy,vz";

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Row reader for a CSV with a fixed header.
class CsvReader {
 public:
  CsvReader(const fs::path& path, const char* header) : source_(path.string()), in_(path, std::ios::binary) {
    if (!in_) throw ValidationError("cannot open " + source_);
    std::string line;
    if (!next_line(line)) throw ParseError(source_, 1, "missing header");
    if (line != header) throw ParseError(source_, 1, "expected header '" + std::string(header) + "'");
    columns_ = split_fields(header).size();
  }

  bool next(std::vector<std::string>& fields) {
    std::string line;
    if (!next_line(line)) return false;
    fields = split_fields(line);
    if (fields.size() != columns_) {
      fail("expected " + std::to_string(columns_) + " columns, found " + std::to_string(fields.size()));
    }
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_, what); }

  std::size_t index(const std::string& s, const char* column) const {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      fail(std::string(column) + ": expected a non-negative integer, got '" + s + "'");
    }
    return v;
  }

  double number(const std::string& s, const char* column) const {
    try {
      return parse_double(s);
    } catch (const std::invalid_argument&) {
      fail(std::string(column) + ": expected a number, got '" + s + "'");
    }
  }

  geom::Motion label(const std::string& s) const {
    if (s == "0") return geom::Motion::kStatic;
    if (s == "1") return geom::Motion::kMoving;
    fail("label: expected 0 or 1, got '" + s + "'");
  }

 private:
  bool next_line(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }

  std::string source_;
  std::ifstream in_;
  std::size_t line_ = 0;
  std::size_t columns_ = 0;
};

std::string label_text(geom::Motion m) { return m == geom::Motion::kMoving ? "1" : "0"; }

}  // namespace

void write_sequence(const LabeledSequence& seq, const fs::path& dir) {
  fs::create_directories(dir);
  {
    const fs::path path = dir / "points.csv";
    auto out = open_out(path);
    out << kPointsHeader << '\n';
    for (std::size_t f = 0; f < seq.frames.size(); ++f) {
      const auto& frame = seq.frames[f];
      frame.validate();
      for (std::size_t i = 0; i < frame.size(); ++i) {
        const auto& p = frame.points[i];
        out << f << ',' << i << ',' << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.z)
            << ',' << format_double(p.v) << ',' << (frame.labels ? label_text((*frame.labels)[i]) : "") << '\n';
      }
    }
    finish(out, path);
  }
  {
    const fs::path path = dir / "ego.csv";
    auto out = open_out(path);
    out << kEgoHeader << '\n';
    for (std::size_t f = 0; f < seq.frames.size(); ++f) {
      const auto& frame = seq.frames[f];
      out << f << ',' << format_double(frame.timestamp) << ',' << (frame.ego_v ? format_double(*frame.ego_v) : "")
          << '\n';
    }
    finish(out, path);
  }
  {
    const fs::path path = dir / "tracks.csv";
    auto out = open_out(path);
    out << kTracksHeader << '\n';
    for (std::size_t t = 0; t < seq.tracks.size(); ++t) {
      const auto& track = seq.tracks[t];
      if (track.positions.size() != track.velocities.size()) {
        throw ContractError("write_sequence: track position and velocity counts differ");
      }
      for (std::size_t f = 0; f < track.positions.size(); ++f) {
        const auto& p = track.positions[f];
        const auto& v = track.velocities[f];
        out << track.id << ',' << label_text(track.kind) << ',' << format_double(track.extent) << ',' << f;
        for (double c : {p[0], p[1], p[2], v[0], v[1], v[2]}) out << ',' << format_double(c);
        out << '\n';
      }
    }
    finish(out, path);
  }
  {
    const fs::path path = dir / "scene.cfg";
    KeyValues kv;
    seq.config.to_kv(kv);
    auto out = open_out(path);
    out << kv.to_string();
    finish(out, path);
  }
}

LabeledSequence read_sequence(const fs::path& dir) {
  LabeledSequence seq;
  const fs::path clean = dir.lexically_normal();
  seq.name = (clean.has_filename() ? clean.filename() : clean.parent_path().filename()).string();

  {
    CsvReader csv(dir / "ego.csv", kEgoHeader);
    std::vector<std::string> row;
    while (csv.next(row)) {
      if (csv.index(row[0], "frame_idx") != seq.frames.size()) csv.fail("frame_idx out of sequence");
      geom::RadarFrame frame;
      frame.timestamp = csv.number(row[1], "timestamp");
      if (!(frame.timestamp >= 0.0)) csv.fail("timestamp must be non-negative");
      if (!row[2].empty()) frame.ego_v = csv.number(row[2], "ego_v");
      seq.frames.push_back(std::move(frame));
    }
  }
  {
    CsvReader csv(dir / "points.csv", kPointsHeader);
    std::vector<std::string> row;
    std::vector<std::optional<bool>> labeled(seq.frames.size());
    std::size_t last_frame = 0;
    while (csv.next(row)) {
      const std::size_t f = csv.index(row[0], "frame_idx");
      if (f >= seq.frames.size()) csv.fail("frame_idx " + row[0] + " has no entry in ego.csv");
      if (f < last_frame) csv.fail("rows must be grouped by ascending frame_idx");
      last_frame = f;
      auto& frame = seq.frames[f];
      if (csv.index(row[1], "point_idx") != frame.points.size()) csv.fail("point_idx out of sequence");
      frame.points.push_back({csv.number(row[2], "x"), csv.number(row[3], "y"), csv.number(row[4], "z"),
                              csv.number(row[5], "v")});
      const bool has_label = !row[6].empty();
      if (labeled[f] && *labeled[f] != has_label) csv.fail("frame mixes labeled and unlabeled points");
      labeled[f] = has_label;
      if (has_label) {
        if (!frame.labels) frame.labels.emplace();
        frame.labels->push_back(csv.label(row[6]));
      }
    }
    // A frame without points is trivially fully labeled.
    for (std::size_t f = 0; f < seq.frames.size(); ++f) {
      if (!labeled[f]) seq.frames[f].labels.emplace();
    }
  }
  if (fs::exists(dir / "tracks.csv")) {
    CsvReader csv(dir / "tracks.csv", kTracksHeader);
    std::vector<std::string> row;
    while (csv.next(row)) {
      const std::size_t id = csv.index(row[0], "track_id");
      const std::size_t f = csv.index(row[3], "frame_idx");
      if (f == 0) {
        if (id != seq.tracks.size()) csv.fail("track_id out of sequence");
        ObjectTrack t;
        t.id = id;
        t.kind = csv.label(row[1]);
        t.extent = csv.number(row[2], "extent");
        seq.tracks.push_back(std::move(t));
      } else if (seq.tracks.empty() || seq.tracks.back().id != id || seq.tracks.back().positions.size() != f) {
        csv.fail("track rows must list frames 0, 1, ... per track");
      }
      auto& t = seq.tracks.back();
      t.positions.push_back({csv.number(row[4], "x"), csv.number(row[5], "y"), csv.number(row[6], "z")});
      t.velocities.push_back({csv.number(row[7], "vx"), csv.number(row[8], "vy"), csv.number(row[9], "vz")});
    }
  }
  if (fs::exists(dir / "scene.cfg")) seq.config = SceneConfig::from_kv(KeyValues::load(dir / "scene.cfg"));
  return seq;
}

void DatasetSplit::check_disjoint() const {
  std::set<std::string> seen;
  for (const auto* part : {&train, &val, &test}) {
    for (const auto& name : *part) {
      if (!seen.insert(name).second) throw ValidationError("split overlap: sequence '" + name + "' in two parts");
    }
  }
}

DatasetSplit split_dataset(const std::vector<std::string>& names, const std::array<double, 3>& ratios,
                           std::uint64_t seed) {
  double total = 0.0;
  std::size_t nonzero = 0;
  for (double r : ratios) {
    if (!(r >= 0.0)) throw ArgumentError("split_dataset: ratios must be non-negative");
    total += r;
    nonzero += r > 0.0;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ArgumentError("split_dataset: ratios must sum to 1");
  const std::size_t n = names.size();
  if (n < nonzero) {
    throw ArgumentError("split_dataset: " + std::to_string(n) + " sequences for " + std::to_string(nonzero) +
                        " non-empty parts");
  }

  std::array<long long, 3> counts{std::llround(ratios[0] * static_cast<double>(n)),
                                  std::llround(ratios[1] * static_cast<double>(n)), 0};
  counts[2] = static_cast<long long>(n) - counts[0] - counts[1];
  while (counts[2] < 0) {
    ++counts[2];
    --counts[counts[0] >= counts[1] ? 0 : 1];
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (ratios[i] > 0.0 && counts[i] == 0) {
      const auto largest = std::max_element(counts.begin(), counts.end());
      --*largest;
      counts[i] = 1;
    }
  }

  std::vector<std::string> order = names;
  std::sort(order.begin(), order.end());
  if (std::adjacent_find(order.begin(), order.end()) != order.end()) {
    throw ArgumentError("split_dataset: duplicate sequence names");
  }
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);

  DatasetSplit out;
  auto it = order.begin();
  for (auto [part, count] : {std::pair{&out.train, counts[0]}, {&out.val, counts[1]}, {&out.test, counts[2]}}) {
    part->assign(it, it + count);
    std::sort(part->begin(), part->end());
    it += count;
  }
  return out;
}

void write_manifest(const fs::path& root, const DatasetSplit& split) {
  split.check_disjoint();
  KeyValues kv;
  kv.set("train", join(split.train));
  kv.set("val", join(split.val));
  kv.set("test", join(split.test));
  const fs::path path = root / "split.kv";
  auto out = open_out(path);
  out << kv.to_string();
  finish(out, path);
}

DatasetSplit read_manifest(const fs::path& root) {
  const KeyValues kv = KeyValues::load(root / "split.kv");
  auto names = [&](const char* key) {
    std::vector<std::string> out;
    for (auto& s : split_fields(kv.get(key))) {
      if (!s.empty()) out.push_back(s);
    }
    return out;
  };
  DatasetSplit split{names("train"), names("val"), names("test")};
  split.check_disjoint();
  return split;
}

std::vector<std::string> list_sequences(const fs::path& root) {
  if (!fs::is_directory(root)) throw ValidationError("dataset directory not found: " + root.string());
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "points.csv")) out.push_back(entry.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void DatasetSpec::to_kv(KeyValues& kv) const {
  scene.to_kv(kv);
  kv.set("dataset.sequences", sequences);
  kv.set("dataset.ratios", std::vector<double>(ratios.begin(), ratios.end()));
  kv.set("dataset.seed", std::to_string(seed));
}

DatasetSpec DatasetSpec::from_kv(const KeyValues& kv) {
  DatasetSpec s;
  s.scene = SceneConfig::from_kv(kv);
  const auto n = kv.get_int("dataset.sequences", static_cast<std::int64_t>(s.sequences));
  if (n < 1) throw ValidationError("dataset.sequences must be at least 1");
  s.sequences = static_cast<std::size_t>(n);
  const auto r = kv.get_doubles("dataset.ratios", {s.ratios[0], s.ratios[1], s.ratios[2]});
  if (r.size() != 3) throw ValidationError("dataset.ratios needs three entries");
  s.ratios = {r[0], r[1], r[2]};
  const std::string seed = kv.get_string("dataset.seed", "0");
  const auto res = std::from_chars(seed.data(), seed.data() + seed.size(), s.seed);
  if (res.ec != std::errc() || res.ptr != seed.data() + seed.size()) {
    throw ValidationError("dataset.seed: expected an unsigned integer, got '" + seed + "'");
  }
  return s;
}

DatasetSplit simulate_dataset(const DatasetSpec& spec, const fs::path& root) {
  spec.scene.validate();
  fs::create_directories(root);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < spec.sequences; ++i) {
    SceneConfig scene = spec.scene;
    scene.seed = mix_seed({spec.seed, i});
    LabeledSequence seq = simulate_sequence(scene);
    char name[32];
    std::snprintf(name, sizeof name, "seq_%04zu", i);
    seq.name = name;
    write_sequence(seq, root / seq.name);
    names.push_back(seq.name);
  }
  KeyValues kv;
  spec.to_kv(kv);
  {
    const fs::path path = root / "dataset.cfg";
    auto out = open_out(path);
    out << kv.to_string();
    finish(out, path);
  }
  DatasetSplit split = split_dataset(names, spec.ratios, mix_seed({spec.seed, 0x5b}));
  write_manifest(root, split);
  return split;
}

}  // namespace moseve::sim
