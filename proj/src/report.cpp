#include "twotier/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include <json.hpp>

#include "twotier/random.hpp"
#include "twotier/synth.hpp"

namespace twotier {

MemberStats member_stats(const DynamicNetwork& network) {
  const std::size_t n = network.members.size();
  MemberStats s;
  s.degree.assign(n, 0.0);
  s.closeness.assign(n, 0.0);
  s.type_a.assign(n, 0.0);
  s.type_b.assign(n, 0.0);
  s.active_frames.assign(n, 0.0);
  const FrameGraph agg = aggregate(network);
  const auto close = closeness_all(agg);
  const auto ids = agg.nodes();
  for (std::uint32_t i = 0; i < ids.size(); ++i) {
    s.degree[ids[i]] = static_cast<double>(agg.degree(i));
    s.closeness[ids[i]] = close[i];
  }
  for (const auto& frame : network.frames) {
    const auto fids = frame.nodes();
    for (std::uint32_t i = 0; i < fids.size(); ++i) {
      const auto& p = frame.participation(i);
      s.type_a[fids[i]] += p.type_a;
      s.type_b[fids[i]] += p.type_b;
      s.active_frames[fids[i]] += 1.0;
    }
  }
  return s;
}

namespace {

ProfileRow profile_of(std::string name, const NodeSet& members, const MemberStats& stats) {
  ProfileRow row;
  row.group = std::move(name);
  row.members = members.size();
  if (members.empty()) return row;
  for (auto id : members) {
    row.degree += stats.degree.at(id);
    row.closeness += stats.closeness.at(id);
    row.type_a += stats.type_a.at(id);
    row.type_b += stats.type_b.at(id);
    row.active_frames += stats.active_frames.at(id);
  }
  const double k = static_cast<double>(members.size());
  row.degree /= k;
  row.closeness /= k;
  row.type_a /= k;
  row.type_b /= k;
  row.active_frames /= k;
  return row;
}

double parse_number(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::int64_t parse_integer(std::string_view key, std::string_view text) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string x_label(double x) { return format_double(x); }

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::string_view to_string(RankingMethod m) { return m == RankingMethod::Dwks ? "DWKS" : "WKS"; }
std::string_view to_string(NetworkFormat f) { return f == NetworkFormat::TimeFramed ? "time_framed" : "aggregate"; }

}  // namespace

ProfileTable member_profiles(const BackboneSplit& split, const MemberStats& stats) {
  ProfileTable t;
  t.x = split.x;
  t.bm = profile_of("BM", split.backbone, stats);
  t.gm = profile_of("GM", split.general, stats);
  return t;
}

ProfileTable member_profiles(const BackboneSplit& split, const DynamicNetwork& network) {
  return member_profiles(split, member_stats(network));
}

std::vector<double> parse_x_list(std::string_view text) {
  std::vector<double> xs;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (item.empty()) throw ConfigError("x", "empty entry in X list");
    xs.push_back(parse_number("x", item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (xs.empty()) throw ConfigError("x", "at least one X value is required");
  return xs;
}

TypeFilter parse_type_filter(std::string_view text) {
  if (text == "all") return TypeFilter::All;
  if (text == "A" || text == "a") return TypeFilter::A;
  if (text == "B" || text == "b") return TypeFilter::B;
  throw ConfigError("type_filter", "expected A, B or all, got '" + std::string(text) + "'");
}

std::string_view to_string(TypeFilter filter) {
  switch (filter) {
    case TypeFilter::All: return "all";
    case TypeFilter::A: return "A";
    case TypeFilter::B: return "B";
  }
  return "?";
}

void PipelineConfig::validate() const {
  if (input && preset) throw ConfigError("input", "give either an input log or a preset, not both");
  if (!input && !preset) throw ConfigError("input", "an input log or a synthetic preset is required");
  if (xs.empty()) throw ConfigError("x", "at least one X value is required");
  for (double x : xs) {
    if (!(x > 0.0 && x <= 100.0)) throw ConfigError("x", "X must lie in (0, 100], got " + format_double(x));
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha", "must lie in (0, 1]");
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta", "must lie in (0, 1]");
  if (!(continue_jaccard >= 0.0 && continue_jaccard <= 1.0)) throw ConfigError("continue_jaccard", "must lie in [0, 1]");
  if (max_gap && *max_gap < 0) throw ConfigError("max_gap", "must be non-negative");
  if (!(resolution > 0.0)) throw ConfigError("resolution", "must be positive");
  if (coverage_max_x < 1 || coverage_max_x > 100) throw ConfigError("coverage_max_x", "must lie in [1, 100]");
  if (window.length <= 0) throw ConfigError("window", "must be positive");
}

void apply_setting(PipelineConfig& config, std::string_view raw_key, std::string_view raw_value) {
  std::string key(trim(raw_key));
  std::replace(key.begin(), key.end(), '-', '_');
  const auto value = trim(raw_value);
  if (key == "input") {
    config.input = std::filesystem::path(std::string(value));
  } else if (key == "preset") {
    config.preset = std::string(value);
  } else if (key == "format") {
    try {
      config.format = parse_log_format(value);
    } catch (const Error& e) {
      throw ConfigError(key, e.what());
    }
  } else if (key == "window") {
    try {
      config.window = Window::parse(value);
    } catch (const Error& e) {
      throw ConfigError(key, e.what());
    }
  } else if (key == "x") {
    config.xs = parse_x_list(value);
  } else if (key == "seed") {
    const auto v = parse_integer(key, value);
    if (v < 0) throw ConfigError(key, "must be non-negative");
    config.seed = static_cast<std::uint64_t>(v);
  } else if (key == "alpha") {
    config.alpha = parse_number(key, value);
  } else if (key == "beta") {
    config.beta = parse_number(key, value);
  } else if (key == "continue_jaccard") {
    config.continue_jaccard = parse_number(key, value);
  } else if (key == "max_gap") {
    config.max_gap = static_cast<int>(parse_integer(key, value));
  } else if (key == "resolution") {
    config.resolution = parse_number(key, value);
  } else if (key == "type_filter") {
    config.type_filter = parse_type_filter(value);
  } else if (key == "coverage_max_x") {
    config.coverage_max_x = static_cast<int>(parse_integer(key, value));
  } else if (key == "out_dir") {
    config.out_dir = std::filesystem::path(std::string(value));
  } else {
    throw ConfigError(key, "unknown configuration key '" + key + "'");
  }
}

PipelineConfig load_config(std::istream& in) {
  PipelineConfig config;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(text), "line " + std::to_string(number) + ": expected key = value");
    }
    apply_setting(config, text.substr(0, eq), text.substr(eq + 1));
  }
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config " + path.string());
  return load_config(in);
}

const SplitAnalysis& XAnalysis::split(std::string_view label) const {
  for (const auto& s : splits) {
    if (s.label == label) return s;
  }
  throw Error("split '" + std::string(label) + "' was not analysed for X=" + format_double(x));
}

std::vector<TeamRecord> load_records(const PipelineConfig& config) {
  config.validate();
  if (config.preset) return generate(preset_by_name(*config.preset, config.seed)).records;
  const auto& path = *config.input;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read input " + path.string());
  LogFormat format = LogFormat::Csv;
  if (config.format) {
    format = *config.format;
  } else if (path.extension() == ".jsonl" || path.extension() == ".json") {
    format = LogFormat::Jsonl;
  }
  return parse_log(in, format);
}

namespace {

SplitAnalysis analyse_split(std::string label, const DynamicNetwork& network, const NodeSet& backbone, double x,
                            const PipelineConfig& config) {
  SplitAnalysis s;
  s.label = std::move(label);
  s.split = split_network(network, backbone, x);
  std::vector<FrameGraph> bsn, gsn;
  for (const auto& f : s.split.frames) {
    bsn.push_back(f.bsn);
    gsn.push_back(f.gsn);
  }
  DetectOptions options{config.seed, config.resolution};
  s.bsn = detect_all(bsn, options);
  // A separate stream for the general side keeps the two runs independent.
  options.seed = mix_seed(config.seed, 0x6753);
  s.gsn = detect_all(gsn, options);
  MatchParams params{config.alpha, config.beta, config.continue_jaccard, config.max_gap};
  const auto bsn_frames = communities_by_frame(s.bsn);
  const auto gsn_frames = communities_by_frame(s.gsn);
  s.bsn_timeline = classify(bsn_frames, params);
  s.gsn_timeline = classify(gsn_frames, params);
  for (std::size_t t = 0; t < network.frames.size(); ++t) {
    s.abstract.push_back(abstract_frame(network.frames[t], s.bsn.partitions[t], s.gsn.partitions[t]));
    s.metrics.push_back(frame_metrics(s.abstract.back()));
  }
  return s;
}

}  // namespace

Analysis analyze(std::span<const TeamRecord> records, const PipelineConfig& config) {
  config.validate();
  if (records.empty()) throw Error("the activity log is empty");
  Analysis a;
  const ExpandedLog log = expand_teams(records);
  a.network = build_frames(log, infer_frame_spec(records, config.window));
  a.dynamic = dynamic_influence(a.network);
  const FrameGraph agg = aggregate(a.network);
  a.aggregate = static_influence(agg, a.network.members.size());
  a.dynamic_shells = shell_statistics(a.dynamic);
  a.aggregate_shells = shell_statistics(a.aggregate);

  std::vector<double> cov_xs;
  for (int x = 1; x <= config.coverage_max_x; ++x) cov_xs.push_back(x);
  for (auto method : {RankingMethod::WksAggregate, RankingMethod::Dwks}) {
    for (auto format : {NetworkFormat::Aggregate, NetworkFormat::TimeFramed}) {
      for (const auto& p : coverage_curve(a.network, method, format, cov_xs)) a.coverage.push_back({method, format, p});
    }
  }
  a.stats = member_stats(a.network);

  std::optional<DynamicNetwork> net_a, net_b;
  if (config.type_filter != TypeFilter::B) net_a = split_by_type(log, ActivityType::A, a.network);
  if (config.type_filter != TypeFilter::A) net_b = split_by_type(log, ActivityType::B, a.network);

  for (double x : config.xs) {
    XAnalysis xa;
    xa.x = x;
    const BackboneSplit full = select_backbone(a.network, a.dynamic, x);
    xa.profile = member_profiles(full, a.stats);
    if (config.type_filter == TypeFilter::All) xa.splits.push_back(analyse_split("all", a.network, full.backbone, x, config));
    if (net_a) xa.splits.push_back(analyse_split("A", *net_a, full.backbone, x, config));
    if (net_b) xa.splits.push_back(analyse_split("B", *net_b, full.backbone, x, config));
    a.per_x.push_back(std::move(xa));
  }
  return a;
}

std::vector<SummaryRow> summarize(const Analysis& a) {
  std::vector<SummaryRow> rows;
  auto add = [&](std::string x, std::string split, std::string metric, double v) {
    rows.push_back({std::move(x), std::move(split), std::move(metric), v});
  };
  Weight links = 0;
  for (const auto& f : a.network.frames) links += f.total_weight();
  add("", "", "members", static_cast<double>(a.network.members.size()));
  add("", "", "frames", static_cast<double>(a.network.frame_count()));
  add("", "", "links", static_cast<double>(links));
  add("", "", "dwks_distinct_ranks", static_cast<double>(a.dynamic_shells.distinct_ranks));
  add("", "", "wks_distinct_ranks", static_cast<double>(a.aggregate_shells.distinct_ranks));
  for (const auto& xa : a.per_x) {
    const auto xl = x_label(xa.x);
    for (const auto* row : {&xa.profile.bm, &xa.profile.gm}) {
      const std::string g = row->group == "BM" ? "bm" : "gm";
      add(xl, "all", g + "_members", static_cast<double>(row->members));
      add(xl, "all", g + "_degree", row->degree);
      add(xl, "all", g + "_closeness", row->closeness);
      add(xl, "all", g + "_type_a", row->type_a);
      add(xl, "all", g + "_type_b", row->type_b);
      add(xl, "all", g + "_active_frames", row->active_frames);
    }
    for (const auto& s : xa.splits) {
      add(xl, s.label, "bsn_modularity", s.bsn.mean_modularity);
      add(xl, s.label, "gsn_modularity", s.gsn.mean_modularity);
      double dens_bc = 0, dens_gc = 0, bet_bc = 0, bet_gc = 0, n_bc = 0, n_gc = 0;
      double w_bbe = 0, w_gge = 0, w_bge = 0;
      for (const auto& m : s.metrics) {
        dens_bc += m.density_bc;
        dens_gc += m.density_gc;
        bet_bc += m.mean_betweenness_bc;
        bet_gc += m.mean_betweenness_gc;
        n_bc += static_cast<double>(m.bc_count);
        n_gc += static_cast<double>(m.gc_count);
        w_bbe += static_cast<double>(m.bbe_weight);
        w_gge += static_cast<double>(m.gge_weight);
        w_bge += static_cast<double>(m.bge_weight);
      }
      const double frames = static_cast<double>(std::max<std::size_t>(s.metrics.size(), 1));
      const double w = w_bbe + w_gge + w_bge;
      add(xl, s.label, "mean_bc_count", n_bc / frames);
      add(xl, s.label, "mean_gc_count", n_gc / frames);
      add(xl, s.label, "mean_density_bc", dens_bc / frames);
      add(xl, s.label, "mean_density_gc", dens_gc / frames);
      add(xl, s.label, "mean_betweenness_bc", bet_bc / frames);
      add(xl, s.label, "mean_betweenness_gc", bet_gc / frames);
      add(xl, s.label, "share_bbe", w > 0 ? w_bbe / w : 0.0);
      add(xl, s.label, "share_gge", w > 0 ? w_gge / w : 0.0);
      add(xl, s.label, "share_bge", w > 0 ? w_bge / w : 0.0);
    }
  }
  return rows;
}

namespace {

void write_shares(std::ostream& out, const std::vector<EventShares>& shares, const std::string& x,
                  const std::string& split) {
  for (const auto& row : shares) {
    out << x << ',' << split << ',' << row.group << ',' << row.total;
    for (double p : row.kind_percent) out << ',' << format_double(p);
    for (double p : row.attribute_percent) out << ',' << format_double(p);
    out << '\n';
  }
}

}  // namespace

void write_bundle(const Analysis& a, const PipelineConfig& config) {
  namespace fs = std::filesystem;
  const fs::path dir = config.out_dir;
  fs::create_directories(dir);
  std::vector<std::string> files;
  auto open = [&](const fs::path& rel) {
    files.push_back(rel.generic_string());
    fs::create_directories((dir / rel).parent_path());
    return open_out(dir / rel);
  };

  {
    auto out = open("edges.csv");
    write_edge_list(out, a.network);
  }
  {
    auto out = open("influence_dwks.csv");
    write_influence_csv(out, a.dynamic, a.network.members);
  }
  {
    auto out = open("influence_wks.csv");
    write_influence_csv(out, a.aggregate, a.network.members);
  }
  {
    auto out = open("shells.csv");
    out << "method,distinct_influence,distinct_ranks\n";
    out << "DWKS," << a.dynamic_shells.distinct_influence << ',' << a.dynamic_shells.distinct_ranks << '\n';
    out << "WKS," << a.aggregate_shells.distinct_influence << ',' << a.aggregate_shells.distinct_ranks << '\n';
  }
  {
    auto out = open("coverage.csv");
    out << "method,format,x,coverage\n";
    for (const auto& r : a.coverage) {
      out << to_string(r.method) << ',' << to_string(r.format) << ',' << format_double(r.point.x) << ','
          << format_double(r.point.coverage) << '\n';
    }
  }
  {
    auto out = open("profiles.csv");
    out << "x,group,members,avg_degree,avg_closeness,avg_type_a,avg_type_b,avg_active_frames\n";
    for (const auto& xa : a.per_x) {
      for (const auto* r : {&xa.profile.bm, &xa.profile.gm}) {
        out << x_label(xa.x) << ',' << r->group << ',' << r->members << ',' << format_double(r->degree) << ','
            << format_double(r->closeness) << ',' << format_double(r->type_a) << ',' << format_double(r->type_b)
            << ',' << format_double(r->active_frames) << '\n';
      }
    }
  }
  {
    auto mod = open("modularity.csv");
    mod << "x,split,subnetwork,frame,communities,modularity,degenerate\n";
    auto shares = open("event_shares.csv");
    shares << "x,split,subnetwork,events";
    for (auto k : kAllEventKinds) shares << ",pct_" << to_string(k);
    shares << ",pct_V,pct_S,pct_none\n";
    for (const auto& xa : a.per_x) {
      const auto xl = x_label(xa.x);
      for (const auto& s : xa.splits) {
        for (const auto* series : {&s.bsn, &s.gsn}) {
          const char* sub = series == &s.bsn ? "BSN" : "GSN";
          for (const auto& p : series->partitions) {
            mod << xl << ',' << s.label << ',' << sub << ',' << p.frame_index << ',' << p.community_count << ','
                << format_double(p.modularity) << ',' << (p.degenerate ? 1 : 0) << '\n';
          }
        }
        const EventGroup groups[] = {{"BSN", s.bsn_timeline.events}, {"GSN", s.gsn_timeline.events}};
        write_shares(shares, event_shares(groups), xl, s.label);

        const fs::path sub = fs::path("x" + xl) / s.label;
        {
          auto out = open(sub / "bsn_partitions.csv");
          write_partition_csv(out, s.bsn, a.network.members);
        }
        {
          auto out = open(sub / "gsn_partitions.csv");
          write_partition_csv(out, s.gsn, a.network.members);
        }
        {
          auto out = open(sub / "bsn_events.csv");
          write_events_csv(out, s.bsn_timeline.events);
        }
        {
          auto out = open(sub / "gsn_events.csv");
          write_events_csv(out, s.gsn_timeline.events);
        }
        {
          auto out = open(sub / "abstract_edges.csv");
          write_abstract_csv(out, s.abstract);
        }
        {
          auto out = open(sub / "metrics.csv");
          write_metrics_csv(out, s.metrics);
        }
      }
    }
  }
  {
    auto out = open("summary.csv");
    out << "x,split,metric,value\n";
    for (const auto& r : summarize(a)) {
      out << r.x << ',' << r.split << ',' << r.metric << ',' << format_double(r.value) << '\n';
    }
  }

  nlohmann::ordered_json m;
  m["tool"] = "twotier";
  m["version"] = TWOTIER_VERSION;
  m["prng"] = std::string(Rng::kAlgorithm);
  m["seed"] = config.seed;
  if (config.input) m["input"] = config.input->generic_string();
  if (config.preset) m["preset"] = *config.preset;
  m["window"] = config.window.to_string();
  m["x"] = config.xs;
  m["alpha"] = config.alpha;
  m["beta"] = config.beta;
  m["continue_jaccard"] = config.continue_jaccard;
  m["max_gap"] = config.max_gap ? nlohmann::ordered_json(*config.max_gap) : nlohmann::ordered_json(nullptr);
  m["resolution"] = config.resolution;
  m["type_filter"] = std::string(to_string(config.type_filter));
  m["coverage_max_x"] = config.coverage_max_x;
  m["frames"] = a.network.frame_count();
  m["frame_start"] = format_timestamp(a.network.spec.start());
  m["frame_end"] = format_timestamp(a.network.spec.end());
  m["members"] = a.network.members.size();
  std::sort(files.begin(), files.end());
  m["files"] = files;
  auto out = open_out(dir / "manifest.json");
  out << m.dump(2) << '\n';
}

Analysis run_pipeline(const PipelineConfig& config) {
  const auto records = load_records(config);
  Analysis a = analyze(records, config);
  write_bundle(a, config);
  return a;
}

}  // namespace twotier
