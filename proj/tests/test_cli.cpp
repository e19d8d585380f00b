// Copyright 2026 The grel Authors.
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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "grel/cli.hpp"
#include "grel/util.hpp"
#include "test_support.hpp"

namespace grel {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun grel(std::vector<std::string> args) {
  args.insert(args.begin(), "grel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

#define EXPECT_OK(run)                                   \
  do {                                                   \
    CliRun r_ = (run);                                      \
    ASSERT_EQ(r_.code, 0) << r_.err;                     \
  } while (0)

// The whole synthetic pipeline under one seed, written into `d`.
void pipeline(const testing::TempDir& d) {
  auto f = [&](const std::string& n) { return d.file(n); };
  EXPECT_OK(grel({"--seed", "42", "synth", "--out-dir", d.path().string(), "--clips-per-split",
                  "30", "--selected-per-split", "8", "--qualification-items", "6"}));
  EXPECT_OK(grel({"--seed", "42", "select", "--clips", f("clips.tsv"), "--captions",
                  f("captions.tsv"), "--similarity", f("similarity.tsv"), "--out",
                  f("candidates.jsonl")}));
  EXPECT_OK(grel({"--seed", "42", "confirm-tn", "--candidates", f("candidates.jsonl"),
                  "--accept-all", "--out", f("confirmed.jsonl")}));
  EXPECT_OK(grel({"--seed", "42", "build-hits", "--candidates", f("confirmed.jsonl"), "--out",
                  f("hits.jsonl")}));
  EXPECT_OK(grel({"--seed", "42", "simulate", "--hits", f("hits.jsonl"), "--workers",
                  "honest:8:8,inverted:1:5", "--out", f("answers.tsv")}));
  EXPECT_OK(grel({"--seed", "42", "qc", "--answers", f("answers.tsv"), "--hits", f("hits.jsonl"),
                  "--out", f("kept.tsv"), "--report", f("verdicts.tsv")}));
  EXPECT_OK(grel({"--seed", "42", "aggregate", "--answers", f("kept.tsv"), "--hits",
                  f("hits.jsonl"), "--out", f("aggregates.tsv")}));
  EXPECT_OK(grel({"--seed", "42", "report", "--aggregates", f("aggregates.tsv"), "--answers",
                  f("kept.tsv"), "--out-dir", f("report")}));
  EXPECT_OK(grel({"--seed", "42", "pairs", "--aggregates", f("aggregates.tsv"), "--clips",
                  f("clips.tsv"), "--captions", f("captions.tsv"), "--out", f("pairs.tsv")}));
  EXPECT_OK(grel({"--seed", "42", "train", "--pairs", f("pairs.tsv"), "--audio-features",
                  f("audio.feat"), "--text-features", f("text.feat"), "--regime", "BiRel",
                  "--max-epochs", "4", "--embed-dim", "8", "--batch-size", "8", "--out",
                  f("model.json"), "--history", f("history.tsv")}));
  EXPECT_OK(grel({"--seed", "42", "eval", "--model", f("model.json"), "--pairs", f("pairs.tsv"),
                  "--audio-features", f("audio.feat"), "--text-features", f("text.feat"),
                  "--split", "evaluation", "--out", f("metrics.tsv")}));
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_file(e.path().string());
  }
  return out;
}

TEST(Cli, SameSeedGivesByteIdenticalArtifacts) {
  testing::TempDir a, b;
  pipeline(a);
  if (HasFatalFailure()) return;
  pipeline(b);
  auto sa = snapshot(a.path()), sb = snapshot(b.path());
  ASSERT_EQ(sa.size(), sb.size());
  EXPECT_GE(sa.size(), 18u);
  for (const auto& [name, bytes] : sa) EXPECT_EQ(bytes, sb[name]) << name;

  // Every produced artifact records its stage, seed and input digests.
  for (const char* n : {"candidates.jsonl", "hits.jsonl", "answers.tsv", "kept.tsv",
                        "aggregates.tsv", "pairs.tsv", "model.json", "metrics.tsv"}) {
    const auto& text = sa[n];
    ASSERT_EQ(text.rfind("# grel-artifact {", 0), 0u) << n;
    auto line = text.substr(0, text.find('\n'));
    EXPECT_NE(line.find("\"seed\":42"), std::string::npos) << line;
    EXPECT_EQ(line.find(a.path().string()), std::string::npos) << "absolute path leaked: " << line;
  }
  EXPECT_NE(sa["pairs.tsv"].find("BiCrRel+BiRel"), std::string::npos);
  EXPECT_NE(sa["verdicts.tsv"].find("inverted-000"), std::string::npos);
}

TEST(Cli, DifferentSeedChangesSynthesis) {
  testing::TempDir a, b;
  EXPECT_OK(grel({"--seed", "1", "synth", "--out-dir", a.path().string(), "--clips-per-split", "20",
                  "--selected-per-split", "3"}));
  EXPECT_OK(grel({"--seed", "2", "synth", "--out-dir", b.path().string(), "--clips-per-split", "20",
                  "--selected-per-split", "3"}));
  EXPECT_NE(read_file(a.file("similarity.tsv")), read_file(b.file("similarity.tsv")));
}

TEST(Cli, QcOnEmptyAnswersWritesEmptyOutputs) {
  testing::TempDir d;
  d.write("answers.tsv", "");
  d.write("hits.jsonl", "");
  CliRun r = grel({"qc", "--answers", d.file("answers.tsv"), "--hits", d.file("hits.jsonl"), "--out",
                d.file("kept.tsv"), "--report", d.file("verdicts.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto kept = read_file(d.file("kept.tsv"));
  ASSERT_EQ(kept.rfind("# grel-artifact", 0), 0u);
  // header line plus the column row, nothing else
  EXPECT_EQ(std::count(kept.begin(), kept.end(), '\n'), 2);
}

TEST(Cli, UsageAndDataErrorsUseDistinctCodes) {
  CliRun none = grel({});
  EXPECT_EQ(none.code, 1);
  EXPECT_EQ(none.err.rfind("grel: error code=1 kind=usage msg=\"", 0), 0u) << none.err;
  EXPECT_EQ(grel({"frobnicate"}).code, 1);
  EXPECT_EQ(grel({"qc", "--answers"}).code, 1);
  EXPECT_EQ(grel({"qc", "--answers", "/nonexistent", "--hits", "/nonexistent", "--out", "x",
                  "--report", "y"})
                .code,
            1);

  testing::TempDir d;
  d.write("answers.tsv", "hit_id\tworker_id\n");
  d.write("hits.jsonl", "");
  CliRun bad = grel({"qc", "--answers", d.file("answers.tsv"), "--hits", d.file("hits.jsonl"),
                  "--out", d.file("k"), "--report", d.file("v")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("grel: error code=2 kind="), std::string::npos) << bad.err;
  EXPECT_EQ(bad.err.back(), '\n');
  EXPECT_FALSE(fs::exists(d.file("k")));

  CliRun help = grel({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("simulate"), std::string::npos);
  EXPECT_EQ(grel({"--version"}).out, "grel/0.1.0\n");
}

TEST(Cli, ConfirmTnRequiresOneMode) {
  testing::TempDir d;
  EXPECT_OK(grel({"synth", "--out-dir", d.path().string(), "--clips-per-split", "20",
                  "--selected-per-split", "2"}));
  EXPECT_OK(grel({"select", "--clips", d.file("clips.tsv"), "--captions", d.file("captions.tsv"),
                  "--similarity", d.file("similarity.tsv"), "--out", d.file("cands.jsonl")}));
  EXPECT_EQ(grel({"build-hits", "--candidates", d.file("cands.jsonl"), "--out", d.file("h")}).code, 2);
  EXPECT_OK(grel({"build-hits", "--candidates", d.file("cands.jsonl"), "--allow-unverified",
                  "--out", d.file("h")}));
  EXPECT_EQ(grel({"confirm-tn", "--candidates", d.file("cands.jsonl"), "--out", d.file("c")}).code, 1);
}

std::string histogram_of(const testing::TempDir& d, std::vector<std::string> extra) {
  std::vector<std::string> args{"report", "--aggregates", d.file("agg.tsv"), "--out-dir",
                                d.file("r")};
  args.insert(args.begin(), extra.begin(), extra.end());
  CliRun r = grel(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return read_file(d.file("r/histograms.tsv"));
}

TEST(Cli, FlagsBeatEnvironmentWhichBeatsConfigFile) {
  testing::TempDir d;
  d.write("agg.tsv",
          "caption_id\tclip_id\tsplit\trole\tagg_score\tn_raw\traw_scores\n"
          "q\tc\tdevelopment\tC15\t37\t1\t37\n");
  d.write("grel.toml", "[report]\nbin-width = 20\n");
  auto bins = [](const std::string& h) { return std::count(h.begin(), h.end(), '\n'); };
  const auto base = bins(histogram_of(d, {}));
  const auto from_file = bins(histogram_of(d, {"--config", d.file("grel.toml")}));
  EXPECT_LT(from_file, base);
  ::setenv("GREL_BIN_WIDTH", "50", 1);
  const auto from_env = bins(histogram_of(d, {"--config", d.file("grel.toml")}));
  EXPECT_LT(from_env, from_file);
  CliRun flag = grel({"--config", d.file("grel.toml"), "report", "--aggregates", d.file("agg.tsv"),
                   "--out-dir", d.file("r"), "--bin-width", "25"});
  ::unsetenv("GREL_BIN_WIDTH");
  ASSERT_EQ(flag.code, 0) << flag.err;
  const auto from_flag = bins(read_file(d.file("r/histograms.tsv")));
  EXPECT_GT(from_flag, from_env);
  EXPECT_LT(from_flag, from_file);
}

TEST(Cli, InstalledBinaryReportsExitCodes) {
  const std::string tool = GREL_TOOL_PATH;
  auto status = [](const std::string& cmd) {
    int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status(tool + " --version"), 0);
  EXPECT_EQ(status(tool + " no-such-command"), 1);
  testing::TempDir d;
  d.write("answers.tsv", "garbage\n");
  d.write("hits.jsonl", "");
  EXPECT_EQ(status(tool + " qc --answers " + d.file("answers.tsv") + " --hits " +
                   d.file("hits.jsonl") + " --out " + d.file("k") + " --report " + d.file("v")),
            2);
}

}  // namespace
}  // namespace grel
