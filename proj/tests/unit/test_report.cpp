#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "twotier/report.hpp"
#include "twotier/synth.hpp"

using namespace twotier;
namespace fs = std::filesystem;

namespace {

using Table = std::vector<std::vector<std::string>>;

Table read_csv(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  Table rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error_key(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

PipelineConfig small_config(const fs::path& out) {
  PipelineConfig c;
  c.preset = "small";
  c.seed = 6;
  c.xs = {10, 25};
  c.coverage_max_x = 20;
  c.out_dir = out;
  return c;
}

}  // namespace

TEST_CASE("config file parsing") {
  std::istringstream in(
      "# analysis settings\n"
      "preset = small\n"
      "x = 5, 10,20\n"
      "seed=7\n"
      "\n"
      "type-filter = B\n"
      "max_gap = 2\n"
      "window = 90d\n"
      "out_dir = bundle\n");
  const auto c = load_config(in);
  CHECK(c.preset == "small");
  CHECK(c.xs == std::vector<double>{5, 10, 20});
  CHECK(c.seed == 7);
  CHECK(c.type_filter == TypeFilter::B);
  CHECK(c.max_gap == 2);
  CHECK(c.window == Window{90 * 86400, WindowUnit::Seconds});
  CHECK(c.out_dir == fs::path("bundle"));
}

TEST_CASE("config errors name the key") {
  CHECK(config_error_key([] {
          std::istringstream in("presett = small\n");
          load_config(in);
        }) == "presett");
  PipelineConfig c;
  CHECK(config_error_key([&] { apply_setting(c, "alpha", "lots"); }) == "alpha");
  CHECK(config_error_key([&] { apply_setting(c, "x", "5,,10"); }) == "x");
  CHECK(config_error_key([&] { apply_setting(c, "type_filter", "C"); }) == "type_filter");
  CHECK(config_error_key([&] { apply_setting(c, "window", "3w"); }) == "window");
  CHECK(config_error_key([&] { apply_setting(c, "seed", "-1"); }) == "seed");

  c.preset = "small";
  CHECK(config_error_key([&] { c.validate(); }).empty());
  c.xs = {5, 0};
  CHECK(config_error_key([&] { c.validate(); }) == "x");
  c.xs = {101};
  CHECK(config_error_key([&] { c.validate(); }) == "x");
  c.xs = {5};
  c.input = "log.csv";
  CHECK(config_error_key([&] { c.validate(); }) == "input");
  c.input.reset();
  c.preset.reset();
  CHECK(config_error_key([&] { c.validate(); }) == "input");
}

TEST_CASE("x lists and type filters") {
  CHECK(parse_x_list("1.5,50") == std::vector<double>{1.5, 50});
  CHECK_THROWS_AS(parse_x_list(""), ConfigError);
  CHECK(parse_type_filter("all") == TypeFilter::All);
  CHECK(parse_type_filter("A") == TypeFilter::A);
  CHECK(to_string(TypeFilter::B) == "B");
}

TEST_CASE("member profiles average over each group") {
  DynamicNetwork net;
  net.members = MemberRegistry({"a", "b", "c"});
  net.frames.emplace_back(0, std::vector<NodeId>{}, std::vector<WeightedEdge>{{0, 1, 1}, {0, 2, 1}},
                          std::vector<std::pair<NodeId, Participation>>{{0, {1, 0}}, {1, {1, 0}}, {2, {0, 1}}});
  net.frames.emplace_back(1, std::vector<NodeId>{}, std::vector<WeightedEdge>{{0, 1, 1}},
                          std::vector<std::pair<NodeId, Participation>>{{0, {0, 2}}, {1, {0, 2}}});
  const auto split = split_network(net, NodeSet{0}, 34);
  const auto t = member_profiles(split, net);
  CHECK(t.bm.members == 1);
  CHECK(t.bm.degree == 2.0);
  CHECK(t.bm.closeness == 1.0);
  CHECK(t.bm.type_a == 1.0);
  CHECK(t.bm.type_b == 2.0);
  CHECK(t.bm.active_frames == 2.0);
  CHECK(t.gm.members == 2);
  CHECK(t.gm.degree == 1.0);
  CHECK(t.gm.active_frames == 1.5);
  CHECK(t.gm.type_b == 1.5);
}

TEST_CASE("pipeline bundle is complete and consistent with its summary") {
  const fs::path dir = "report_bundle_a";
  fs::remove_all(dir);
  const auto config = small_config(dir);
  const auto analysis = run_pipeline(config);
  REQUIRE(analysis.per_x.size() == 2);
  CHECK(analysis.per_x[0].splits.size() == 3);
  CHECK(analysis.coverage.size() == 4 * 20);
  CHECK_THROWS_AS(analysis.per_x[0].split("C"), Error);

  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  for (const auto& f : manifest["files"]) CHECK(fs::exists(dir / f.get<std::string>()));
  CHECK(manifest["members"] == analysis.network.members.size());

  const auto summary = read_csv(dir / "summary.csv");
  std::map<std::string, double> value;
  for (std::size_t i = 1; i < summary.size(); ++i) {
    value[summary[i][0] + "/" + summary[i][1] + "/" + summary[i][2]] = std::stod(summary[i][3]);
  }
  CHECK(value.at("//members") == static_cast<double>(analysis.network.members.size()));

  for (const auto& xa : analysis.per_x) {
    const auto xl = format_double(xa.x);
    for (const auto& s : xa.splits) {
      const auto metrics = read_csv(dir / ("x" + xl) / s.label / "metrics.csv");
      REQUIRE(metrics.size() == analysis.network.frames.size() + 1);
      double dens_bc = 0, w_bge = 0, w_all = 0;
      for (std::size_t i = 1; i < metrics.size(); ++i) {
        dens_bc += std::stod(metrics[i][9]);
        w_all += std::stod(metrics[i][13]) + std::stod(metrics[i][14]) + std::stod(metrics[i][15]);
        w_bge += std::stod(metrics[i][15]);
      }
      const auto key = xl + "/" + s.label + "/";
      CHECK(value.at(key + "mean_density_bc") ==
            doctest::Approx(dens_bc / static_cast<double>(metrics.size() - 1)).epsilon(1e-12));
      CHECK(value.at(key + "share_bge") == doctest::Approx(w_bge / w_all).epsilon(1e-12));
      CHECK(value.at(key + "bsn_modularity") == doctest::Approx(s.bsn.mean_modularity).epsilon(1e-12));
    }
    const auto bm = value.at(xl + "/all/bm_members");
    CHECK(bm == static_cast<double>(backbone_size(analysis.network.members.size(), xa.x)));
  }

  const auto coverage = read_csv(dir / "coverage.csv");
  CHECK(coverage.size() == 1 + 4 * 20);
  CHECK(coverage[0] == std::vector<std::string>{"method", "format", "x", "coverage"});
}

TEST_CASE("pipeline output is byte-for-byte deterministic") {
  const fs::path a = "report_bundle_a2", b = "report_bundle_b2";
  fs::remove_all(a);
  fs::remove_all(b);
  run_pipeline(small_config(a));
  run_pipeline(small_config(b));
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    CHECK_MESSAGE(slurp(entry.path()) == slurp(b / rel), rel.string());
    ++files;
  }
  CHECK(files > 10);
}

TEST_CASE("type filter restricts the analysed splits") {
  auto config = small_config("unused");
  config.type_filter = TypeFilter::A;
  const auto records = load_records(config);
  const auto analysis = analyze(records, config);
  REQUIRE(analysis.per_x[0].splits.size() == 1);
  CHECK(analysis.per_x[0].splits[0].label == "A");
  CHECK_NOTHROW(analysis.per_x[0].split("A"));
}

TEST_CASE("input logs are read by extension") {
  const auto records = generate(small_preset(6)).records;
  {
    std::ofstream out("report_log.jsonl");
    write_log(out, records, LogFormat::Jsonl);
  }
  PipelineConfig config;
  config.input = "report_log.jsonl";
  CHECK(load_records(config) == records);
  config.input = "missing.csv";
  CHECK_THROWS_AS(load_records(config), Error);
}
