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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <oculofilt/oculofilt.hpp>

#include "cli.hpp"

namespace {

namespace fs = std::filesystem;
using oculofilt::cli::run;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("oculofilt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  [[nodiscard]] std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"filter", "x.csv"}).code, 2);  // --filter is required
  EXPECT_EQ(invoke({"filter", "--filter", "median", "x.csv"}).code, 2);
  EXPECT_EQ(invoke({"filter", "--filter", "custom", "x.csv"}).code, 2);
  EXPECT_EQ(invoke({"filter", "--filter", "zlp100", "--order", "13", "x.csv"}).code, 2);
  EXPECT_EQ(invoke({"spectrum", "--fft-length", "100", "x.csv"}).code, 2);
  EXPECT_EQ(invoke({"synth", "--scenario", "fixation"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, DataErrorsNameFileAndRow) {
  spit(path("bad.csv"), "t_ms,x_deg,y_deg\n0,0,0\n1,0,0\n3,0,0\n");
  const auto r = invoke({"filter", "--filter", "std", path("bad.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad.csv"), std::string::npos);
  EXPECT_NE(r.err.find("row 2"), std::string::npos);
  EXPECT_EQ(invoke({"filter", "--filter", "std", path("missing.csv")}).code, 1);
}

TEST_F(CliTest, ShortSpanErrorNamesSpan) {
  spit(path("short.csv"), "t_ms,x_deg,y_deg\n0,0,0\n1,0,0\n2,0,0\n3,,\n4,0,0\n");
  const auto r = invoke({"filter", "--filter", "extra", "--short-spans", "error", path("short.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("rows 0..2"), std::string::npos);
}

TEST_F(CliTest, FilterExtraIsStdThenExtraPerSpan) {
  std::string text = "t_ms,x_deg,y_deg\n";
  const std::vector<double> x{0, 0, 1, 0, 0, 2, 2, 0, 0, 5, 0, 3, 3, 0, 0, 1, 0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    text += std::to_string(i) + "," + (i == 9 ? std::string() : oculofilt::csv::format_number(x[i])) + ",0\n";
  }
  spit(path("in.csv"), text);
  ASSERT_EQ(invoke({"filter", "--filter", "extra", path("in.csv"), "-o", path("out.csv")}).code, 0);
  const auto out = oculofilt::load_recording(slurp(path("out.csv")));
  const auto in = oculofilt::load_recording(text);
  for (const auto& span : oculofilt::contiguous_valid_spans(in, 1)) {
    const auto s = oculofilt::slice(in.x_deg, span);
    const auto expected = oculofilt::extra_filter(oculofilt::std_filter(s));
    for (std::size_t i = 0; i < span.length; ++i) {
      EXPECT_EQ(out.x_deg[span.start_index + i], expected[i]);
    }
  }
  EXPECT_FALSE(out.valid[9]);
}

TEST_F(CliTest, SynthWritesRecordingAndTruth) {
  ASSERT_EQ(invoke({"synth", "--scenario", "saccades", "--seed", "3", "-o", path("s.csv")}).code, 0);
  const auto rec = oculofilt::load_recording(slurp(path("s.csv")));
  EXPECT_EQ(rec.size(), 17000u);
  const auto truth = slurp(path("s.truth.csv"));
  EXPECT_EQ(truth.substr(0, truth.find('\n')), "onset_ms,offset_ms,amplitude_deg,peak_velocity_deg_s,duration_ms");
  EXPECT_EQ(std::count(truth.begin(), truth.end(), '\n'), 21);
}

TEST_F(CliTest, FreqrespStopBandAndSpikeBracket) {
  ASSERT_EQ(invoke({"synth", "--scenario", "fixation", "--seed", "2", "-o", path("fix.csv")}).code, 0);
  const auto last_gain_db = [&](const std::string& filter) {
    const auto r = invoke({"freqresp", "--filter", filter, path("fix.csv")});
    EXPECT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string header, line, last;
    std::getline(in, header);
    EXPECT_EQ(header, "freq_hz,gain,gain_db,phase_diff_rad");
    while (std::getline(in, line)) last = line;
    const auto fields = oculofilt::csv::split(last);
    EXPECT_EQ(fields[0], "500");
    return *oculofilt::csv::parse_number(fields[2]);
  };
  EXPECT_LE(last_gain_db("zlp100"), -80.0);
  const double std_db = last_gain_db("std");
  EXPECT_GE(std_db, -30.0);
  EXPECT_LE(std_db, -10.0);
}

TEST_F(CliTest, JsonAndCsvCarryTheSameNumbers) {
  ASSERT_EQ(invoke({"synth", "--samples", "4096", "-o", path("fix.csv")}).code, 0);
  const auto csv = invoke({"spectrum", "--filter", "zlp50", path("fix.csv")});
  const auto js = invoke({"spectrum", "--filter", "zlp50", "--json", path("fix.csv")});
  ASSERT_EQ(csv.code, 0);
  ASSERT_EQ(js.code, 0);
  const auto doc = nlohmann::json::parse(js.out);
  EXPECT_EQ(doc["n_segments_averaged"], 16);
  std::istringstream in(csv.out);
  std::string line;
  std::getline(in, line);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const auto f = oculofilt::csv::split(line);
    const char* names[] = {"freq_hz", "amplitude", "phase_rad"};
    for (int c = 0; c < 3; ++c) {
      EXPECT_EQ(*oculofilt::csv::parse_number(f[c]), doc["columns"][names[c]][row].get<double>());
    }
    ++row;
  }
  EXPECT_EQ(row, 129u);
}

TEST_F(CliTest, ConfigFileSuppliesDefaultsFlagWins) {
  ASSERT_EQ(invoke({"synth", "--samples", "4096", "-o", path("fix.csv")}).code, 0);
  spit(path("run.conf"), "# shared settings\nfilter=zlp50\nedges=50,100\nfft-length=128\n");
  const auto via_config = invoke({"spectrum", "--config", path("run.conf"), path("fix.csv")});
  const auto via_flags = invoke({"spectrum", "--filter", "zlp50", "--fft-length", "128", path("fix.csv")});
  ASSERT_EQ(via_config.code, 0) << via_config.err;
  EXPECT_EQ(via_config.out, via_flags.out);
  const auto overridden = invoke({"spectrum", "--config", path("run.conf"), "--filter", "none", path("fix.csv")});
  const auto plain = invoke({"spectrum", "--fft-length", "128", path("fix.csv")});
  EXPECT_EQ(overridden.out, plain.out);

  spit(path("bad.conf"), "no-such-flag=1\n");
  EXPECT_EQ(invoke({"spectrum", "--config", path("bad.conf"), path("fix.csv")}).code, 2);
}

TEST_F(CliTest, SeveralInputsWriteIntoDirectory) {
  for (const char* seed : {"1", "2"}) {
    ASSERT_EQ(invoke({"synth", "--samples", "4096", "--seed", seed, "-o", path(std::string("f") + seed + ".csv")}).code, 0);
  }
  EXPECT_EQ(invoke({"spectrum", path("f1.csv"), path("f2.csv")}).code, 2);
  ASSERT_EQ(invoke({"spectrum", path("f1.csv"), path("f2.csv"), "-o", path("out")}).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "f1.spectrum.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "f2.spectrum.csv"));
  EXPECT_EQ(slurp(dir_ / "out" / "f1.spectrum.csv"), invoke({"spectrum", path("f1.csv")}).out);
  for (const auto& entry : fs::directory_iterator(dir_ / "out")) {
    EXPECT_EQ(entry.path().string().find(".tmp."), std::string::npos);
  }
}

TEST_F(CliTest, BandsEmitsOneColumnPerBand) {
  ASSERT_EQ(invoke({"synth", "--samples", "1000", "-o", path("fix.csv")}).code, 0);
  const auto r = invoke({"bands", "--edges", "50,75,100,300", path("fix.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t_ms,band_0_50,band_51_75,band_76_100,band_101_300,band_301_500");
}

TEST_F(CliTest, SaccadesThenMainseq) {
  ASSERT_EQ(invoke({"synth", "--scenario", "mainseq", "--seed", "5", "-o", path("ms.csv")}).code, 0);
  for (const char* cond : {"none", "zlp50"}) {
    const auto r = invoke({"saccades", "--filter", cond, "--condition", cond, "--recording", path("ms.csv"),
                           "-o", path(std::string("sacc_") + cond + ".csv")});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  const auto header = slurp(path("sacc_none.csv"));
  EXPECT_EQ(header.substr(0, header.find('\n')),
            "onset_ms,offset_ms,amplitude_deg,peak_velocity_deg_s,duration_ms,condition,recording");
  const auto r = invoke({"mainseq", path("sacc_none.csv"), path("sacc_zlp50.csv"), "--scatter", path("scatter.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "condition,label,n_small,mean_small,sd_small,n_large,mean_large,sd_large");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 15), "none,No Filter,");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 13), "zlp50,Z-LP50,");
  const auto scatter = slurp(path("scatter.csv"));
  EXPECT_EQ(scatter.substr(0, scatter.find('\n')), "ln_amp,ln_pkv,condition");
}

TEST_F(CliTest, ThreadEnvironmentValidated) {
  ASSERT_EQ(invoke({"synth", "--samples", "4096", "-o", path("fix.csv")}).code, 0);
  ::setenv("OCULOFILT_THREADS", "zero", 1);
  EXPECT_EQ(invoke({"spectrum", path("fix.csv")}).code, 2);
  ::setenv("OCULOFILT_THREADS", "3", 1);
  EXPECT_EQ(invoke({"spectrum", path("fix.csv")}).code, 0);
  ::unsetenv("OCULOFILT_THREADS");
}

}  // namespace
