#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gridner/cli.hpp"

namespace gridner {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("gridner_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(path(name), std::ios::binary) << content;
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  std::vector<json> read_lines(const std::string& p) const {
    std::vector<json> out;
    for (auto& rec : parse_jsonl(slurp(p), p)) out.push_back(std::move(rec.value));
    return out;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, GridDecodeSingleGrid) {
  const std::vector<EntityMention> gold{{"SYMPTOM", {1, 2}}};
  const auto grid = encode_grid(gold, 4);
  const auto in = write("grid.json", to_json(grid).dump());
  ASSERT_EQ(run({"grid-decode", "--in", in}), cli::kExitOk) << err_.str();
  const json decoded = json::parse(out_.str());
  ASSERT_EQ(decoded["entities"].size(), 1u);
  EXPECT_EQ(decoded["entities"][0]["type"], "SYMPTOM");
  EXPECT_EQ(decoded["entities"][0]["tokens"], json::array({1, 2}));
}

TEST_F(CliTest, EvalClsIdenticalFilesScoreOne) {
  const auto gold = write("gold.jsonl",
                          "{\"id\":\"a\",\"text\":\"x\",\"label\":1}\n"
                          "{\"id\":\"b\",\"text\":\"y\",\"label\":0}\n");
  ASSERT_EQ(run({"eval-cls", "--pred", gold, "--gold", gold}), cli::kExitOk) << err_.str();
  EXPECT_EQ(json::parse(out_.str())["f1"], 1.0);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({}), cli::kExitUsage);
  EXPECT_EQ(run({"normalize", "--bogus"}), cli::kExitUsage);
  EXPECT_EQ(run({"normalize", "--in", path("missing.jsonl"), "--out", path("o.jsonl")}), cli::kExitData);
  EXPECT_NE(err_.str().find("missing.jsonl"), std::string::npos);
  const auto bad = write("bad.jsonl", "{\"id\":\"a\",\"text\":\"x\"}\n{not json\n");
  EXPECT_EQ(run({"normalize", "--in", bad, "--out", path("o.jsonl")}), cli::kExitData);
  EXPECT_NE(err_.str().find(":2"), std::string::npos);
  EXPECT_EQ(run({"--help"}), cli::kExitOk);
}

TEST_F(CliTest, NormalizeTokenizeEncodeDecodeRoundTrip) {
  const auto raw = write("raw.jsonl",
                         "{\"id\":\"t1\",\"text\":\"Tengo  dolor de cabeza y fiebre\","
                         "\"entities\":[{\"type\":\"SYMPTOM\",\"spans\":[[7,12],[25,31]]}]}\n");
  ASSERT_EQ(run({"normalize", "--in", raw, "--out", path("norm.jsonl")}), cli::kExitOk) << err_.str();
  const auto norm = read_lines(path("norm.jsonl"));
  ASSERT_EQ(norm.size(), 1u);
  const std::u32string text = unicode::decode(norm[0]["text"].get<std::string>());
  for (const auto& span : norm[0]["entities"][0]["spans"]) {
    const std::size_t s = span[0], e = span[1];
    const std::string piece = unicode::encode(text.substr(s, e - s));
    EXPECT_TRUE(piece == "dolor" || piece == "fiebre") << piece;
  }

  ASSERT_EQ(run({"tokenize", "--in", path("norm.jsonl"), "--out", path("tok.jsonl")}), cli::kExitOk);
  EXPECT_FALSE(read_lines(path("tok.jsonl"))[0]["tokens"].empty());

  ASSERT_EQ(run({"grid-encode", "--in", path("norm.jsonl"), "--out", path("grid.jsonl")}), cli::kExitOk)
      << err_.str();
  ASSERT_EQ(run({"grid-decode", "--in", path("grid.jsonl"), "--out", path("dec.jsonl")}), cli::kExitOk)
      << err_.str();
  const auto dec = read_lines(path("dec.jsonl"));
  ASSERT_EQ(dec.size(), 1u);
  EXPECT_EQ(dec[0]["entities"][0]["spans"], norm[0]["entities"][0]["spans"]);

  ASSERT_EQ(run({"eval-ner", "--pred", path("dec.jsonl"), "--gold", path("norm.jsonl")}), cli::kExitOk)
      << err_.str();
  EXPECT_EQ(json::parse(out_.str())["f1"], 1.0);
}

TEST_F(CliTest, GridFuseAveragesScores) {
  const std::vector<CellLabel> labels{CellLabel::none(), CellLabel::nnw(), CellLabel::thw("A")};
  auto scores = [&](double p) {
    std::vector<double> dist;
    for (int cell = 0; cell < 4; ++cell) dist.insert(dist.end(), {1.0 - p, p / 2, p / 2});
    json j = to_json(GridScores(2, labels, dist));
    j["id"] = "r";
    return j.dump();
  };
  const auto a = write("a.json", scores(0.2));
  const auto b = write("b.json", scores(0.6));
  ASSERT_EQ(run({"grid-fuse", "--in", a, "--in", b}), cli::kExitOk) << err_.str();
  const auto fused = scores_from_json(json::parse(out_.str()), "fused");
  EXPECT_NEAR(fused.dist()[0], 0.6, 1e-12);
  EXPECT_EQ(run({"grid-decode", "--in", a}), cli::kExitOk) << err_.str();
}

TEST_F(CliTest, FoldsAndOversampleAreSeeded) {
  ASSERT_EQ(run({"--seed", "3", "gen-synth", "--out", path("s.jsonl"), "--n", "100"}), cli::kExitOk);
  ASSERT_EQ(run({"--seed", "3", "gen-synth", "--out", path("s2.jsonl"), "--n", "100"}), cli::kExitOk);
  EXPECT_EQ(slurp(path("s.jsonl")), slurp(path("s2.jsonl")));
  EXPECT_EQ(read_lines(path("s.jsonl")).size(), 100u);

  ASSERT_EQ(run({"--seed", "4", "folds", "--in", path("s.jsonl"), "--k", "4"}), cli::kExitOk);
  const auto split = folds_from_json(json::parse(out_.str()), "folds");
  EXPECT_EQ(split.k, 4u);
  std::size_t total = 0;
  for (const auto& f : split.folds) total += f.size();
  EXPECT_EQ(total, 100u);

  ASSERT_EQ(run({"oversample", "--in", path("s.jsonl"), "--out", path("o.jsonl")}), cli::kExitOk);
  std::size_t pos = 0, neg = 0;
  for (const auto& r : read_lines(path("o.jsonl"))) (r["label"] == 1 ? pos : neg)++;
  EXPECT_EQ(pos, neg);
}

TEST_F(CliTest, TrainPredictFuseEval) {
  ASSERT_EQ(run({"--seed", "1", "gen-synth", "--out", path("s.jsonl"), "--n", "300"}), cli::kExitOk);
  ASSERT_EQ(run({"--seed", "1", "folds", "--in", path("s.jsonl"), "--k", "3", "--out", path("f.json")}),
            cli::kExitOk);
  std::vector<std::string> fuse_args{"fuse"};
  for (int h = 0; h < 3; ++h) {
    const auto model = path("m" + std::to_string(h) + ".json");
    const auto pred = path("p" + std::to_string(h) + ".jsonl");
    ASSERT_EQ(run({"--seed", "1", "--quiet", "train", "--in", path("s.jsonl"), "--out", model, "--epochs",
                   "3", "--dim", "4096", "--folds", path("f.json"), "--holdout-fold", std::to_string(h)}),
              cli::kExitOk)
        << err_.str();
    EXPECT_TRUE(err_.str().empty());
    ASSERT_EQ(run({"predict", "--model", model, "--in", path("s.jsonl"), "--out", pred}), cli::kExitOk)
        << err_.str();
    fuse_args.insert(fuse_args.end(), {"--in", pred});
  }
  fuse_args.insert(fuse_args.end(), {"--out", path("fused.jsonl")});
  ASSERT_EQ(run(fuse_args), cli::kExitOk) << err_.str();
  const auto fused = read_lines(path("fused.jsonl"));
  const auto p0 = read_lines(path("p0.jsonl"));
  ASSERT_EQ(fused.size(), 300u);
  EXPECT_EQ(fused[0]["id"], p0[0]["id"]);

  ASSERT_EQ(run({"eval-cls", "--pred", path("fused.jsonl"), "--gold", path("s.jsonl")}), cli::kExitOk);
  EXPECT_GT(json::parse(out_.str())["f1"].get<double>(), 0.0);

  // Retraining with the same seed reproduces the checkpoint byte for byte.
  ASSERT_EQ(run({"--seed", "1", "--quiet", "train", "--in", path("s.jsonl"), "--out", path("again.json"),
                 "--epochs", "3", "--dim", "4096", "--folds", path("f.json"), "--holdout-fold", "0"}),
            cli::kExitOk);
  EXPECT_EQ(slurp(path("again.json")), slurp(path("m0.json")));

  EXPECT_EQ(run({"train", "--in", path("s.jsonl"), "--out", path("x.json"), "--loss", "hinge"}),
            cli::kExitUsage);
  EXPECT_EQ(run({"train", "--in", path("s.jsonl"), "--out", path("x.json"), "--holdout-fold", "1"}),
            cli::kExitUsage);
}

TEST_F(CliTest, EmojiMapFromFlagAndEnvironment) {
  const auto map = write("map.tsv", "\xF0\x9F\x98\xB7\tmascarilla\n");
  const auto in = write("in.jsonl", "{\"id\":\"e\",\"text\":\"hoy \xF0\x9F\x98\xB7\"}\n");
  ASSERT_EQ(run({"--emoji-map", map, "normalize", "--in", in, "--out", path("a.jsonl")}), cli::kExitOk)
      << err_.str();
  EXPECT_NE(slurp(path("a.jsonl")).find("mascarilla"), std::string::npos);

  ::setenv("GRIDNER_EMOJI_MAP", map.c_str(), 1);
  const int code = run({"normalize", "--in", in, "--out", path("b.jsonl")});
  ::unsetenv("GRIDNER_EMOJI_MAP");
  ASSERT_EQ(code, cli::kExitOk) << err_.str();
  EXPECT_EQ(slurp(path("b.jsonl")), slurp(path("a.jsonl")));

  ASSERT_EQ(run({"normalize", "--in", in, "--out", path("c.jsonl")}), cli::kExitOk);
  EXPECT_EQ(slurp(path("c.jsonl")).find("mascarilla"), std::string::npos);
}

}  // namespace
}  // namespace gridner
