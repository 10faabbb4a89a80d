// Copyright 2026 The oculofilt Authors
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

#include "cli.hpp"

#include <unistd.h>

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <oculofilt/oculofilt.hpp>

namespace oculofilt::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Bad flags or flag combinations; exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Options

struct FilterOptions {
  std::string name = "none";
  std::optional<double> cutoff_hz;
  int order = 7;
  bool compensate = false;
};

struct SegmentOptions {
  std::size_t fft_length = kDefaultSegmentLength;
  std::size_t block_length = 2048;
  double vmax_deg_s = 25.0;
  bool horizontal_only = false;
  std::string channel = "x";
  std::string phase_average = "arithmetic";
};

struct Options {
  std::string command;
  std::vector<std::string> inputs;
  std::string output;
  std::string config;
  bool json = false;

  FilterOptions filter;
  std::string short_spans = "invalidate";
  SegmentOptions segments;

  std::vector<double> edges{50.0, 75.0, 100.0, 300.0};

  DetectorConfig detector;
  std::string condition;
  bool recording_column = false;

  double split_deg = kClusterSplitDeg;
  std::string scatter;

  std::string scenario = "fixation";
  std::uint64_t seed = 1;
  std::size_t samples = 30000;
  std::size_t count = 0;  // 0 selects the scenario default
};

const std::set<std::string> kFilterNames{"none", "std", "extra", "zlp100", "zlp50", "custom"};

FilterKind make_filter_kind(const FilterOptions& f) {
  if (f.name == "none") return NoFilter{};
  if (f.name == "std") return StdFilter{};
  if (f.name == "extra") return ExtraFilter{};
  if (f.name == "zlp100") return ZeroPhaseLowPass{100.0, f.order, f.compensate};
  if (f.name == "zlp50") return ZeroPhaseLowPass{50.0, f.order, f.compensate};
  return ZeroPhaseLowPass{*f.cutoff_hz, f.order, f.compensate};
}

void validate_filter(const FilterOptions& f) {
  if (!kFilterNames.contains(f.name)) throw UsageError("unknown filter '" + f.name + "'");
  if (f.order < 1 || f.order > kMaxButterworthOrder) {
    throw UsageError("--order must lie in [1, " + std::to_string(kMaxButterworthOrder) + "]");
  }
  if (f.name == "custom") {
    if (!f.cutoff_hz) throw UsageError("--filter custom needs --cutoff-hz");
    if (!(*f.cutoff_hz > 0.0)) throw UsageError("--cutoff-hz must be positive");
  } else if (f.cutoff_hz) {
    throw UsageError("--cutoff-hz applies only to --filter custom");
  }
}

SpectrumConfig make_spectrum_config(const SegmentOptions& s) {
  if (!is_power_of_two(s.fft_length) || s.fft_length < 4) {
    throw UsageError("--fft-length must be a power of two, at least 4");
  }
  if (s.block_length == 0 || s.block_length % s.fft_length != 0) {
    throw UsageError("--block-length must be a positive multiple of --fft-length");
  }
  if (!(s.vmax_deg_s > 0.0)) throw UsageError("--vmax must be positive");
  SpectrumConfig cfg;
  cfg.segments.block_length = s.block_length;
  cfg.segments.subsegment_length = s.fft_length;
  cfg.segments.max_speed_deg_s = s.vmax_deg_s;
  cfg.segments.horizontal_only = s.horizontal_only;
  cfg.segments.channel = s.channel == "y" ? Channel::y : Channel::x;
  cfg.phase_averaging =
      s.phase_average == "circular" ? PhaseAveraging::circular : PhaseAveraging::arithmetic;
  return cfg;
}

ShortSpanPolicy make_policy(const std::string& name) {
  if (name == "keep") return ShortSpanPolicy::keep;
  if (name == "error") return ShortSpanPolicy::error;
  return ShortSpanPolicy::invalidate;
}

// ---------------------------------------------------------------------------
// Tables

/// A column of numbers (NaN for missing) or of strings.
using Column = std::variant<std::vector<double>, std::vector<std::string>>;

struct Table {
  std::vector<std::string> names;
  std::vector<Column> columns;

  void add(std::string name, Column column) {
    names.push_back(std::move(name));
    columns.push_back(std::move(column));
  }

  [[nodiscard]] std::size_t rows() const {
    if (columns.empty()) return 0;
    return std::visit([](const auto& c) { return c.size(); }, columns.front());
  }
};

/// CSV cell text: empty for missing, shortest round-trip otherwise.
std::string cell(double v) { return std::isnan(v) ? std::string() : csv::format_number(v); }

std::string table_csv(const Table& t) {
  std::ostringstream out;
  for (std::size_t c = 0; c < t.names.size(); ++c) out << (c ? "," : "") << t.names[c];
  out << '\n';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (c) out << ',';
      std::visit(
          [&](const auto& col) {
            if constexpr (std::is_same_v<std::decay_t<decltype(col)>, std::vector<double>>) {
              out << cell(col[r]);
            } else {
              out << col[r];
            }
          },
          t.columns[c]);
    }
    out << '\n';
  }
  return out.str();
}

/// JSON number, null for missing, "inf"/"-inf" strings for infinities.
Json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json table_json(const Table& t) {
  Json cols = Json::object();
  for (std::size_t c = 0; c < t.names.size(); ++c) {
    Json arr = Json::array();
    std::visit(
        [&](const auto& col) {
          for (const auto& v : col) {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>) {
              arr.push_back(json_number(v));
            } else {
              arr.push_back(v);
            }
          }
        },
        t.columns[c]);
    cols[t.names[c]] = std::move(arr);
  }
  return cols;
}

std::string render(const Options& opt, const Table& t, Json meta) {
  if (!opt.json) return table_csv(t);
  Json doc;
  doc["command"] = opt.command;
  for (auto& [k, v] : meta.items()) doc[k] = v;
  doc["columns"] = table_json(t);
  return doc.dump(2) + "\n";
}

/// Rows of a generic CSV file keyed by header name.
struct CsvFile {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  }
};

CsvFile read_csv(std::istream& in) {
  CsvFile f;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    const auto text = csv::trim(line);
    if (text.empty()) continue;
    if (!have_header) {
      if (text.front() == '#') continue;
      for (auto field : csv::split(text)) f.header.emplace_back(field);
      have_header = true;
      continue;
    }
    auto fields = csv::split(text);
    if (fields.size() != f.header.size()) {
      throw DataError("expected " + std::to_string(f.header.size()) + " fields, got " +
                          std::to_string(fields.size()),
                      f.rows.size());
    }
    f.rows.emplace_back(fields.begin(), fields.end());
  }
  if (!have_header) throw DataError("missing header line");
  return f;
}

// ---------------------------------------------------------------------------
// Files

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file");
  return in;
}

Recording read_recording(const std::string& path) {
  auto in = open_input(path);
  return load_recording(in);
}

/// Writes through a sibling temp file and renames over the target.
void write_atomic(const fs::path& target, const std::string& text) {
  static std::atomic<unsigned> counter{0};
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw DataError("cannot write " + target.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DataError("cannot rename into " + target.string());
  }
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("OCULOFILT_THREADS"); env && *env) {
    const std::string_view text(env);
    std::size_t value = 0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), value);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size() || value == 0) {
      throw UsageError("OCULOFILT_THREADS must be a positive integer, got '" + std::string(text) + "'");
    }
    cap = value;
  }
  return std::max<std::size_t>(1, std::min(cap, jobs));
}

/// Calls f(i) for i in [0, n) on up to `workers` threads.
template <class F>
void parallel_for(std::size_t n, std::size_t workers, F&& f) {
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < n; i = next++) f(i);
  };
  if (workers <= 1) {
    loop();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop);
}

// ---------------------------------------------------------------------------
// Per-file commands

Json recording_meta(const std::string& path, const Recording& rec) {
  Json meta;
  meta["input"] = path;
  meta["subject_id"] = rec.subject_id;
  meta["eye"] = std::string(to_string(rec.eye));
  meta["sample_rate_hz"] = rec.sample_rate_hz;
  return meta;
}

std::string cmd_filter(const Options& opt, const std::string& path) {
  const auto rec = read_recording(path);
  const auto kind = make_filter_kind(opt.filter);
  const auto out = apply_filter(rec, kind, make_policy(opt.short_spans));
  if (!opt.json) return to_csv(out);

  // Same cells as write_recording: invalid samples with two finite values
  // become missing, otherwise non-finite values do.
  Table t;
  std::vector<double> x(out.size()), y(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const bool blank = !out.valid[i] && std::isfinite(out.x_deg[i]) && std::isfinite(out.y_deg[i]);
    x[i] = blank || !std::isfinite(out.x_deg[i]) ? kMissing : out.x_deg[i];
    y[i] = blank || !std::isfinite(out.y_deg[i]) ? kMissing : out.y_deg[i];
  }
  t.add("t_ms", out.t_ms);
  t.add("x_deg", std::move(x));
  t.add("y_deg", std::move(y));
  auto meta = recording_meta(path, out);
  meta["filter"] = filter_name(kind);
  return render(opt, t, std::move(meta));
}

std::string cmd_spectrum(const Options& opt, const std::string& path) {
  const auto rec = read_recording(path);
  const auto kind = make_filter_kind(opt.filter);
  const auto s = fixation_spectrum(rec, kind, make_spectrum_config(opt.segments));
  Table t;
  t.add("freq_hz", s.freqs_hz);
  t.add("amplitude", s.amplitude);
  t.add("phase_rad", s.phase_rad);
  auto meta = recording_meta(path, rec);
  meta["filter"] = filter_name(kind);
  meta["segment_length"] = s.segment_length;
  meta["n_segments_averaged"] = s.n_segments_averaged;
  return render(opt, t, std::move(meta));
}

std::string cmd_freqresp(const Options& opt, const std::string& path) {
  const auto rec = read_recording(path);
  const auto kind = make_filter_kind(opt.filter);
  const auto run = measure_frequency_response(rec, kind, make_spectrum_config(opt.segments));
  const auto& r = run.response;
  Table t;
  t.add("freq_hz", r.freqs_hz);
  t.add("gain", r.gain);
  t.add("gain_db", r.gain_db);
  t.add("phase_diff_rad", r.phase_diff_rad);
  auto meta = recording_meta(path, rec);
  meta["filter"] = filter_name(kind);
  meta["segment_length"] = run.unfiltered.segment_length;
  meta["n_segments_averaged"] = r.n_segments_averaged;
  Json flagged = Json::array();
  for (std::size_t k = 0; k < r.flagged.size(); ++k) {
    if (r.flagged[k]) flagged.push_back(r.freqs_hz[k]);
  }
  meta["flagged_freq_hz"] = std::move(flagged);
  return render(opt, t, std::move(meta));
}

std::string cmd_bands(const Options& opt, const std::string& path) {
  const auto rec = read_recording(path);
  const auto bands = bands_from_edges(opt.edges, rec.sample_rate_hz, opt.filter.order);
  const auto& channel = opt.segments.channel == "y" ? rec.y_deg : rec.x_deg;
  Table t;
  t.add("t_ms", rec.t_ms);
  for (const auto& band : bands) {
    const SignalFilter filter(BandFilter{band.low_hz, band.high_hz, band.order}, rec.sample_rate_hz);
    std::vector<double> col(rec.size(), kMissing);
    for (const auto& span : contiguous_valid_spans(rec, filter.min_length())) {
      const auto y = filter(slice(channel, span));
      std::copy(y.begin(), y.end(), col.begin() + static_cast<std::ptrdiff_t>(span.start_index));
    }
    t.add(band.label(), std::move(col));
  }
  auto meta = recording_meta(path, rec);
  meta["channel"] = opt.segments.channel;
  meta["order"] = opt.filter.order;
  return render(opt, t, std::move(meta));
}

std::string cmd_saccades(const Options& opt, const std::string& path) {
  const auto raw = read_recording(path);
  const auto kind = make_filter_kind(opt.filter);
  const auto rec = apply_filter(raw, kind, make_policy(opt.short_spans));
  const auto found = detect_saccades(rec, opt.detector);
  Table t;
  std::vector<double> on, off, amp, pkv, dur;
  for (const auto& s : found) {
    on.push_back(rec.t_ms[s.onset_index]);
    off.push_back(rec.t_ms[s.offset_index]);
    amp.push_back(s.amplitude_deg);
    pkv.push_back(s.peak_velocity_deg_s);
    dur.push_back(s.duration_ms);
  }
  t.add("onset_ms", std::move(on));
  t.add("offset_ms", std::move(off));
  t.add("amplitude_deg", std::move(amp));
  t.add("peak_velocity_deg_s", std::move(pkv));
  t.add("duration_ms", std::move(dur));
  if (!opt.condition.empty()) {
    t.add("condition", std::vector<std::string>(found.size(), opt.condition));
  }
  if (opt.recording_column) {
    t.add("recording", std::vector<std::string>(found.size(), fs::path(path).stem().string()));
  }
  auto meta = recording_meta(path, rec);
  meta["filter"] = filter_name(kind);
  return render(opt, t, std::move(meta));
}

using FileCommand = std::string (*)(const Options&, const std::string&);

/// Runs a per-file command over every input. One input writes to -o or
/// stdout; several write <stem>.<command>.<ext> into the -o directory.
int run_per_file(const Options& opt, FileCommand command, std::ostream& out, std::ostream& err) {
  const std::size_t n = opt.inputs.size();
  std::vector<fs::path> targets(n);
  if (n > 1) {
    if (opt.output.empty()) throw UsageError("several inputs need -o DIRECTORY");
    std::error_code ec;
    fs::create_directories(opt.output, ec);
    if (!fs::is_directory(opt.output)) throw UsageError("-o " + opt.output + " is not a directory");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i) {
      const auto name = fs::path(opt.inputs[i]).stem().string() + "." + opt.command +
                        (opt.json ? ".json" : ".csv");
      if (!seen.insert(name).second) throw UsageError("two inputs map to output " + name);
      targets[i] = fs::path(opt.output) / name;
    }
  } else if (!opt.output.empty()) {
    targets[0] = opt.output;
  }

  std::vector<std::string> results(n), errors(n);
  parallel_for(n, worker_count(n), [&](std::size_t i) {
    try {
      results[i] = command(opt, opt.inputs[i]);
      if (!targets[i].empty()) write_atomic(targets[i], results[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  int code = kExitOk;
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      err << "oculofilt " << opt.command << ": " << opt.inputs[i] << ": " << errors[i] << '\n';
      code = kExitDataError;
    } else if (targets[i].empty()) {
      out << results[i];
    }
  }
  return code;
}

// ---------------------------------------------------------------------------
// mainseq

std::string input_error(const std::string& path, const std::exception& e) {
  return path + ": " + e.what();
}

int cmd_mainseq(const Options& opt, std::ostream& out) {
  struct Row {
    double amplitude, peak;
    std::string condition;
  };
  std::vector<Row> rows;
  std::map<std::pair<std::string, std::string>, std::vector<SaccadeRecord>> groups;
  for (const auto& path : opt.inputs) {
    try {
      auto in = open_input(path);
      const auto file = read_csv(in);
      const auto amp_col = file.find("amplitude_deg");
      const auto pkv_col = file.find("peak_velocity_deg_s");
      const auto cond_col = file.find("condition");
      const auto rec_col = file.find("recording");
      if (!amp_col || !pkv_col) {
        throw DataError("needs amplitude_deg and peak_velocity_deg_s columns");
      }
      if (!cond_col && opt.condition.empty()) {
        throw DataError("no condition column; pass --condition");
      }
      const std::string stem = fs::path(path).stem().string();
      for (std::size_t r = 0; r < file.rows.size(); ++r) {
        const auto& fields = file.rows[r];
        const auto a = csv::parse_number(fields[*amp_col]);
        const auto v = csv::parse_number(fields[*pkv_col]);
        if (!a || !v || !(*a > 0.0) || !(*v > 0.0) || !std::isfinite(*a) || !std::isfinite(*v)) {
          throw DataError("amplitude and peak velocity must be positive numbers", r);
        }
        const std::string condition = opt.condition.empty() ? fields[*cond_col] : opt.condition;
        const std::string recording = rec_col ? fields[*rec_col] : stem;
        SaccadeRecord s;
        s.amplitude_deg = *a;
        s.peak_velocity_deg_s = *v;
        groups[{condition, recording}].push_back(s);
        rows.push_back({*a, *v, condition});
      }
    } catch (const Error& e) {
      throw DataError(input_error(path, e));
    }
  }

  std::map<std::string, std::vector<MainSequenceFit>> fits;
  RobustFitConfig fit_cfg;
  for (const auto& [key, saccades] : groups) {
    auto& list = fits[key.first];
    for (const auto& f : fit_main_sequence(saccades, opt.split_deg, fit_cfg)) list.push_back(f);
  }
  const auto summary = summarize_by_condition(fits);

  Table table;
  std::vector<std::string> conditions, labels;
  std::vector<double> n_small, mean_small, sd_small, n_large, mean_large, sd_large;
  for (const auto& s : summary) {
    conditions.push_back(s.condition);
    labels.push_back(condition_label(s.condition));
    n_small.push_back(static_cast<double>(s.small.n_fits));
    mean_small.push_back(s.small.mean);
    sd_small.push_back(s.small.sd);
    n_large.push_back(static_cast<double>(s.large.n_fits));
    mean_large.push_back(s.large.mean);
    sd_large.push_back(s.large.sd);
  }
  table.add("condition", std::move(conditions));
  table.add("label", std::move(labels));
  table.add("n_small", std::move(n_small));
  table.add("mean_small", std::move(mean_small));
  table.add("sd_small", std::move(sd_small));
  table.add("n_large", std::move(n_large));
  table.add("mean_large", std::move(mean_large));
  table.add("sd_large", std::move(sd_large));
  Json meta;
  meta["inputs"] = opt.inputs;
  meta["split_deg"] = opt.split_deg;
  const auto text = render(opt, table, std::move(meta));

  if (!opt.scatter.empty()) {
    Table scatter;
    std::vector<double> la, lv;
    std::vector<std::string> cond;
    for (const auto& r : rows) {
      la.push_back(std::log(r.amplitude));
      lv.push_back(std::log(r.peak));
      cond.push_back(r.condition);
    }
    scatter.add("ln_amp", std::move(la));
    scatter.add("ln_pkv", std::move(lv));
    scatter.add("condition", std::move(cond));
    write_atomic(opt.scatter, render(opt, scatter, Json::object()));
  }
  if (opt.output.empty()) {
    out << text;
  } else {
    write_atomic(opt.output, text);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

fs::path truth_path(const fs::path& output) {
  fs::path p = output;
  if (p.extension() == ".csv") p.replace_extension();
  p += ".truth.csv";
  return p;
}

Table saccade_truth_table(const std::vector<synth::SaccadeTruth>& truth) {
  Table t;
  std::vector<double> on, off, amp, pkv, dur;
  for (const auto& s : truth) {
    on.push_back(s.onset_ms);
    off.push_back(s.offset_ms);
    amp.push_back(s.amplitude_deg);
    pkv.push_back(s.peak_velocity_deg_s);
    dur.push_back(s.duration_ms);
  }
  t.add("onset_ms", std::move(on));
  t.add("offset_ms", std::move(off));
  t.add("amplitude_deg", std::move(amp));
  t.add("peak_velocity_deg_s", std::move(pkv));
  t.add("duration_ms", std::move(dur));
  return t;
}

int cmd_synth(const Options& opt) {
  if (opt.output.empty()) throw UsageError("synth needs -o FILE");
  Recording rec;
  Table truth;
  if (opt.scenario == "fixation") {
    synth::FixationScenario cfg;
    cfg.samples = opt.samples;
    auto fix = synth::gen_fixation(cfg, opt.seed);
    std::vector<double> index, t, width;
    for (const auto& s : fix.spikes) {
      index.push_back(static_cast<double>(s.index));
      t.push_back(fix.recording.t_ms[s.index]);
      width.push_back(static_cast<double>(s.width));
    }
    truth.add("index", std::move(index));
    truth.add("t_ms", std::move(t));
    truth.add("width", std::move(width));
    rec = std::move(fix.recording);
  } else {
    synth::SaccadeScenario cfg;
    if (opt.scenario == "mainseq") {
      cfg.count = 200;
      cfg.min_amplitude_deg = 0.5;
      cfg.interval_ms = 600.0;
    }
    if (opt.count > 0) cfg.count = opt.count;
    auto s = synth::gen_saccade_scenario(cfg, opt.seed);
    truth = saccade_truth_table(s.truth);
    rec = std::move(s.recording);
  }
  write_atomic(opt.output, to_csv(rec));
  write_atomic(truth_path(opt.output), table_csv(truth));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Parsing

void add_common(CLI::App* sub, Options& opt, bool with_inputs = true) {
  if (with_inputs) sub->add_option("inputs", opt.inputs, "Input CSV files")->required();
  sub->add_option("-o,--output", opt.output, "Output file, or directory for several inputs");
  sub->add_flag("--json", opt.json, "Write JSON instead of CSV");
  sub->add_option("--config", opt.config, "key=value file supplying defaults for flags");
}

void add_filter_options(CLI::App* sub, Options& opt, bool required) {
  auto* f = sub->add_option("--filter", opt.filter.name, "none, std, extra, zlp100, zlp50 or custom");
  if (required) f->required();
  sub->add_option("--cutoff-hz", opt.filter.cutoff_hz, "Cutoff for --filter custom");
  sub->add_option("--order", opt.filter.order, "Butterworth order")->capture_default_str();
  sub->add_flag("--compensate", opt.filter.compensate,
                "Raise the design cutoff so the zero-phase composite is -3 dB at the nominal value");
}

void add_segment_options(CLI::App* sub, Options& opt) {
  auto& s = opt.segments;
  sub->add_option("--fft-length", s.fft_length, "Subsegment and FFT length")->capture_default_str();
  sub->add_option("--block-length", s.block_length, "Velocity-veto block length")->capture_default_str();
  sub->add_option("--vmax", s.vmax_deg_s, "Veto speed in deg/s")->capture_default_str();
  sub->add_flag("--horizontal-only", s.horizontal_only, "Veto on |vx| instead of 2-D speed");
  sub->add_option("--channel", s.channel, "Analysed channel")
      ->check(CLI::IsMember({"x", "y"}))
      ->capture_default_str();
  sub->add_option("--phase-average", s.phase_average, "arithmetic or circular")
      ->check(CLI::IsMember({"arithmetic", "circular"}))
      ->capture_default_str();
}

void add_short_spans(CLI::App* sub, Options& opt) {
  sub->add_option("--short-spans", opt.short_spans, "invalidate, keep or error")
      ->check(CLI::IsMember({"invalidate", "keep", "error"}))
      ->capture_default_str();
}

void build_app(CLI::App& app, Options& opt) {
  app.require_subcommand(1, 1);

  auto* filter = app.add_subcommand("filter", "Filter recordings per valid span");
  add_common(filter, opt);
  add_filter_options(filter, opt, true);
  add_short_spans(filter, opt);

  auto* spectrum = app.add_subcommand("spectrum", "Average amplitude spectrum of fixation segments");
  add_common(spectrum, opt);
  add_filter_options(spectrum, opt, false);
  add_segment_options(spectrum, opt);

  auto* freqresp = app.add_subcommand("freqresp", "Empirical frequency response of a filter");
  add_common(freqresp, opt);
  add_filter_options(freqresp, opt, true);
  add_segment_options(freqresp, opt);

  auto* bands = app.add_subcommand("bands", "Zero-phase band decomposition");
  add_common(bands, opt);
  bands->add_option("--edges", opt.edges, "Increasing band edges in Hz")->delimiter(',');
  bands->add_option("--order", opt.filter.order, "Butterworth order")->capture_default_str();
  bands->add_option("--channel", opt.segments.channel, "Decomposed channel")
      ->check(CLI::IsMember({"x", "y"}))
      ->capture_default_str();

  auto* saccades = app.add_subcommand("saccades", "Detect saccades");
  add_common(saccades, opt);
  add_filter_options(saccades, opt, false);
  add_short_spans(saccades, opt);
  auto& d = opt.detector;
  saccades->add_option("--onset-threshold", d.onset_threshold_deg_s, "deg/s")->capture_default_str();
  saccades->add_option("--offset-threshold", d.offset_threshold_deg_s, "deg/s")->capture_default_str();
  saccades->add_option("--min-duration", d.min_duration_ms, "ms")->capture_default_str();
  saccades->add_option("--merge-gap", d.merge_gap_ms, "ms")->capture_default_str();
  saccades->add_option("--condition", opt.condition, "Adds a condition column with this value");
  saccades->add_flag("--recording", opt.recording_column, "Adds a recording column (input stem)");

  auto* mainseq = app.add_subcommand("mainseq", "Main-sequence slope table from saccade CSVs");
  add_common(mainseq, opt);
  mainseq->add_option("--split", opt.split_deg, "Cluster boundary in degrees")->capture_default_str();
  mainseq->add_option("--scatter", opt.scatter, "Also write ln_amp,ln_pkv,condition here");
  mainseq->add_option("--condition", opt.condition, "Condition for inputs lacking the column");

  auto* gen = app.add_subcommand("synth", "Write a synthetic recording and its truth sidecar");
  add_common(gen, opt, false);
  gen->add_option("--scenario", opt.scenario, "fixation, saccades or mainseq")
      ->check(CLI::IsMember({"fixation", "saccades", "mainseq"}))
      ->capture_default_str();
  gen->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  gen->add_option("--samples", opt.samples, "Fixation length in samples")->capture_default_str();
  gen->add_option("--count", opt.count, "Number of saccades");
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.starts_with(flag + "=")) return true;
  }
  return false;
}

/// Appends --key=value for config entries the subcommand knows and the
/// command line leaves unset. Keys belonging only to other subcommands are
/// skipped; unknown keys are usage errors.
std::vector<std::string> expand_config(CLI::App& app, std::vector<std::string> args) {
  CLI::App* sub = nullptr;
  for (const auto& a : args) {
    if (a.starts_with("-")) continue;
    sub = app.get_subcommand_no_throw(a);
    break;
  }
  if (sub == nullptr) return args;

  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = csv::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    std::string key(csv::trim(text.substr(0, eq)));
    const std::string value(csv::trim(text.substr(eq + 1)));
    while (key.starts_with("-")) key.erase(0, 1);
    const std::string flag = "--" + key;
    if (key == "config") continue;
    if (sub->get_option_no_throw(flag) == nullptr) {
      bool elsewhere = false;
      for (const auto* other : app.get_subcommands([](CLI::App*) { return true; })) {
        elsewhere = elsewhere || other->get_option_no_throw(flag) != nullptr;
      }
      if (!elsewhere) {
        throw UsageError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
      }
      continue;
    }
    if (given_on_command_line(args, flag)) continue;
    extra.push_back(flag + "=" + value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

int dispatch(Options& opt, std::ostream& out, std::ostream& err) {
  const auto& c = opt.command;
  if (c == "filter" || c == "spectrum" || c == "freqresp" || c == "saccades") {
    validate_filter(opt.filter);
  }
  if (c == "spectrum" || c == "freqresp") (void)make_spectrum_config(opt.segments);
  if (c == "freqresp" && opt.filter.name == "none") {
    throw UsageError("freqresp needs a filter other than none");
  }
  if (c == "bands" && (opt.filter.order < 1 || opt.filter.order > kMaxButterworthOrder)) {
    throw UsageError("--order must lie in [1, " + std::to_string(kMaxButterworthOrder) + "]");
  }
  if (c == "filter") return run_per_file(opt, cmd_filter, out, err);
  if (c == "spectrum") return run_per_file(opt, cmd_spectrum, out, err);
  if (c == "freqresp") return run_per_file(opt, cmd_freqresp, out, err);
  if (c == "bands") return run_per_file(opt, cmd_bands, out, err);
  if (c == "saccades") return run_per_file(opt, cmd_saccades, out, err);
  if (c == "mainseq") return cmd_mainseq(opt, out);
  return cmd_synth(opt);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Eye-movement signal filtering and analysis", "oculofilt"};
  build_app(app, opt);
  try {
    const auto expanded = expand_config(app, args);
    std::vector<const char*> argv{"oculofilt"};
    for (const auto& a : expanded) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
    }
    opt.command = app.get_subcommands().front()->get_name();
    return dispatch(opt, out, err);
  } catch (const UsageError& e) {
    err << "oculofilt: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "oculofilt " << opt.command << ": " << e.what() << '\n';
    return kExitDataError;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace oculofilt::cli
