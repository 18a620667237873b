#include "ispn/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "CLI11.hpp"
#include "ispn/datasets.hpp"
#include "ispn/errors.hpp"
#include "ispn/exact.hpp"
#include "ispn/io.hpp"
#include "ispn/stats.hpp"

namespace fs = std::filesystem;

namespace ispn {

const char* kToolVersion = "0.1.0";

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  return out;
}

std::string iso_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t from = 0;
  while (true) {
    std::size_t to = s.find(sep, from);
    out.push_back(s.substr(from, to - from));
    if (to == std::string::npos) break;
    from = to + 1;
  }
  return out;
}

double parse_num(const std::string& s, const std::string& spec) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw BadRegimeSpec("bad number '" + s + "' in regime '" + spec + "'");
  }
}

std::vector<double> parse_nums(const std::string& s, std::size_t want, const std::string& family,
                               const std::string& spec) {
  std::vector<std::string> parts = split(s, ',');
  if (parts.size() != want)
    throw BadRegimeSpec(family + " needs " + std::to_string(want) + " parameters in regime '" +
                        spec + "'");
  std::vector<double> out;
  for (const std::string& p : parts) out.push_back(parse_num(p, spec));
  return out;
}

void write_manifest(const std::string& out_dir, const nlohmann::json& m) {
  std::ofstream f(fs::path(out_dir) / "manifest.json");
  if (!f) throw FormatError("cannot write manifest under '" + out_dir + "'");
  f << m.dump(2) << '\n';
}

std::vector<std::uint64_t> seeds_from_json(const nlohmann::json& j, const char* key,
                                           std::vector<std::uint64_t> fallback) {
  if (!j.contains(key)) return fallback;
  std::vector<std::uint64_t> out;
  for (const auto& v : j.at(key)) out.push_back(v.get<std::uint64_t>());
  return out;
}

struct LoadedRoster {
  std::vector<Dataset> data;
  std::vector<std::string> stems;  // sorted, full paths without extension
};

LoadedRoster load_roster_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw BadRegimeSpec("roster dir '" + dir + "' does not exist");
  LoadedRoster r;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".csv") continue;
    fs::path side = e.path();
    side.replace_extension(".json");
    if (fs::exists(side)) r.stems.push_back((e.path().parent_path() / e.path().stem()).string());
  }
  std::sort(r.stems.begin(), r.stems.end());
  if (r.stems.empty()) throw BadRegimeSpec("no dataset csv/json pairs in '" + dir + "'");
  for (const std::string& s : r.stems) r.data.push_back(load_dataset(s));
  for (const Dataset& d : r.data)
    if (d.names != r.data[0].names || d.domains != r.data[0].domains)
      throw ShapeMismatch("roster datasets disagree on schema");
  return r;
}

// builtin dataset whose variable names match the roster's, or ""
std::string match_builtin(const std::vector<std::string>& names) {
  for (const std::string& id : dataset_ids())
    if (builtin_scm(id).graph.names() == names) return id;
  return "";
}

std::vector<TrainedModel> load_models(const std::vector<std::string>& paths,
                                      const std::string& mode) {
  if (paths.empty()) throw BadRegimeSpec("eval mode '" + mode + "' needs --checkpoints");
  std::vector<TrainedModel> models;
  for (const std::string& p : paths) models.push_back(model_from_checkpoint(load_checkpoint(p)));
  for (std::size_t k = 1; k < models.size(); ++k)
    if (models[k].regimes != models[0].regimes || models[k].gate.input_dim != models[0].gate.input_dim)
      throw ShapeMismatch("checkpoint '" + paths[k] + "' was trained on a different roster");
  return models;
}

}  // namespace

Intervention parse_regime(const std::string& spec, const Scm& scm) {
  if (spec.empty()) throw BadRegimeSpec("empty regime spec");
  if (spec == "obs") return Intervention{};
  Intervention iv;
  for (const std::string& clause : split(spec, '+')) {
    if (clause.rfind("do:", 0) != 0)
      throw BadRegimeSpec("regime clause '" + clause + "' must be 'obs' or start with 'do:'");
    const std::size_t eq = clause.find('=');
    if (eq == std::string::npos || eq <= 3)
      throw BadRegimeSpec("clause '" + clause + "' needs the form do:<var>=<value>");
    const std::string var = clause.substr(3, eq - 3);
    const std::string val = clause.substr(eq + 1);
    try {
      scm.graph.index_of(var);
    } catch (const UnknownVariable&) {
      throw BadRegimeSpec("unknown variable '" + var + "' in regime '" + spec + "'");
    }
    if (iv.targets.count(var)) throw BadRegimeSpec("duplicate target '" + var + "' in '" + spec + "'");
    Mechanism m;
    if (val == "uniform") {
      m = uniform_intervention(scm, var).targets.at(var);
    } else if (val.rfind("bern", 0) == 0) {
      m = Mechanism::make_distribution(
          DistributionSpec::make_bernoulli(parse_num(val.substr(4), spec)));
    } else if (val.rfind("gamma:", 0) == 0) {
      std::vector<double> p = parse_nums(val.substr(6), 2, "gamma", spec);
      m = Mechanism::make_distribution(DistributionSpec::make_gamma(p[0], p[1]));
    } else if (val.rfind("beta:", 0) == 0) {
      std::vector<double> p = parse_nums(val.substr(5), 4, "beta", spec);
      m = Mechanism::make_distribution(DistributionSpec::make_beta(p[0], p[1], p[2], p[3]));
    } else if (val.rfind("ind:", 0) == 0) {
      std::vector<double> p = parse_nums(val.substr(4), 2, "ind", spec);
      m = Mechanism::make_distribution(DistributionSpec::make_two_point(p[0], p[1]));
    } else {
      m = Mechanism::make_atomic(parse_num(val, spec));
    }
    iv.targets[var] = std::move(m);
  }
  try {
    iv.validate();
  } catch (const Error& e) {
    throw BadRegimeSpec(std::string(e.what()) + " in regime '" + spec + "'");
  }
  return iv;
}

std::vector<Intervention> parse_regimes(const std::string& csv, const Scm& scm) {
  // commas both separate regimes and sit inside parameter lists; a fragment
  // that does not start a regime belongs to the previous one
  std::vector<std::string> specs;
  for (const std::string& frag : split(csv, ',')) {
    if (frag == "obs" || frag.rfind("do:", 0) == 0 || specs.empty())
      specs.push_back(frag);
    else
      specs.back() += "," + frag;
  }
  std::vector<Intervention> out;
  for (const std::string& s : specs) out.push_back(parse_regime(s, scm));
  return out;
}

nlohmann::json GenerateOptions::to_json() const {
  return {{"dataset", dataset}, {"regimes", regimes}, {"n", n},
          {"seed", seed},       {"out_dir", out_dir}, {"run_id", run_id}};
}

GenerateOptions GenerateOptions::from_json(const nlohmann::json& j) {
  GenerateOptions o;
  o.dataset = j.value("dataset", o.dataset);
  o.regimes = j.value("regimes", o.regimes);
  o.n = j.value("n", o.n);
  o.seed = j.value("seed", o.seed);
  o.out_dir = j.value("out_dir", o.out_dir);
  o.run_id = j.value("run_id", o.run_id);
  return o;
}

nlohmann::json TrainOptions::to_json() const {
  return {{"roster_dir", roster_dir}, {"out_dir", out_dir}, {"seeds", seeds},
          {"epochs", epochs},         {"batch", batch},     {"lr", lr},
          {"hidden", hidden},         {"repetitions", repetitions},
          {"sums", sums},             {"leaves", leaves},   {"depth", depth},
          {"run_id", run_id}};
}

TrainOptions TrainOptions::from_json(const nlohmann::json& j) {
  TrainOptions o;
  o.roster_dir = j.value("roster_dir", o.roster_dir);
  o.out_dir = j.value("out_dir", o.out_dir);
  o.seeds = seeds_from_json(j, "seeds", o.seeds);
  o.epochs = j.value("epochs", o.epochs);
  o.batch = j.value("batch", o.batch);
  o.lr = j.value("lr", o.lr);
  o.hidden = j.value("hidden", o.hidden);
  o.repetitions = j.value("repetitions", o.repetitions);
  o.sums = j.value("sums", o.sums);
  o.leaves = j.value("leaves", o.leaves);
  o.depth = j.value("depth", o.depth);
  o.run_id = j.value("run_id", o.run_id);
  return o;
}

nlohmann::json EvalOptions::to_json() const {
  return {{"mode", mode},         {"dataset", dataset},     {"checkpoints", checkpoints},
          {"roster_dir", roster_dir}, {"out_dir", out_dir}, {"treatment", treatment},
          {"outcome", outcome},   {"n", n},                 {"mc_n", mc_n},
          {"gt_seed", gt_seed},   {"seeds", seeds},         {"passes", passes},
          {"run_id", run_id}};
}

EvalOptions EvalOptions::from_json(const nlohmann::json& j) {
  EvalOptions o;
  o.mode = j.value("mode", o.mode);
  o.dataset = j.value("dataset", o.dataset);
  o.checkpoints = j.value("checkpoints", o.checkpoints);
  o.roster_dir = j.value("roster_dir", o.roster_dir);
  o.out_dir = j.value("out_dir", o.out_dir);
  o.treatment = j.value("treatment", o.treatment);
  o.outcome = j.value("outcome", o.outcome);
  o.n = j.value("n", o.n);
  o.mc_n = j.value("mc_n", o.mc_n);
  o.gt_seed = j.value("gt_seed", o.gt_seed);
  o.seeds = seeds_from_json(j, "seeds", o.seeds);
  o.passes = j.value("passes", o.passes);
  o.run_id = j.value("run_id", o.run_id);
  return o;
}

void cmd_generate(const GenerateOptions& opts) {
  const Scm scm = builtin_scm(opts.dataset);
  const std::vector<Intervention> roster =
      opts.regimes.empty() ? default_roster(scm) : parse_regimes(opts.regimes, scm);
  if (roster.empty()) throw BadRegimeSpec("empty regime roster");
  const long long n = opts.n < 0 ? dataset_default_n(opts.dataset) : opts.n;
  if (n <= 0) throw BadRegimeSpec("sample count must be positive");
  const std::string run_id =
      opts.run_id.empty() ? "gen-" + opts.dataset + "-s" + std::to_string(opts.seed) : opts.run_id;
  const std::string started = iso_now();

  fs::create_directories(opts.out_dir);
  nlohmann::json outputs = nlohmann::json::array();
  nlohmann::json regimes = nlohmann::json::array();
  for (std::size_t k = 0; k < roster.size(); ++k) {
    Dataset ds = sample(scm, roster[k], static_cast<int>(n), substream_seed(opts.seed, k));
    const std::string name = "r" + std::to_string(k) + "_" + sanitize(roster[k].describe());
    save_dataset(ds, (fs::path(opts.out_dir) / name).string(), run_id);
    outputs.push_back(name + ".csv");
    outputs.push_back(name + ".json");
    regimes.push_back(roster[k].describe());
  }

  nlohmann::json cfg = opts.to_json();
  cfg["n"] = n;
  cfg["run_id"] = run_id;
  write_manifest(opts.out_dir, {{"command", "generate"},
                                {"run_id", run_id},
                                {"tool_version", kToolVersion},
                                {"started", started},
                                {"finished", iso_now()},
                                {"config", cfg},
                                {"resolved_regimes", regimes},
                                {"outputs", outputs},
                                {"timing_outputs", nlohmann::json::array()}});
}

void cmd_train(const TrainOptions& opts) {
  if (opts.seeds.empty()) throw BadRegimeSpec("need at least one training seed");
  const LoadedRoster roster = load_roster_dir(opts.roster_dir);
  const std::string matched = match_builtin(roster.data[0].names);

  TrainConfig cfg = matched.empty() ? TrainConfig{} : dataset_default_train(matched);
  if (opts.epochs >= 0) cfg.epochs = opts.epochs;
  if (opts.batch > 0) cfg.batch_size = opts.batch;
  if (opts.lr > 0) cfg.learning_rate = opts.lr;
  if (opts.hidden > 0) cfg.hidden = opts.hidden;
  RatConfig rat = matched.empty() ? RatConfig{0, 0, 0, 0, 0} : dataset_default_rat(matched);
  if (opts.repetitions > 0) rat.repetitions = opts.repetitions;
  if (opts.sums > 0) rat.sums_per_region = opts.sums;
  if (opts.leaves > 0) rat.leaves_per_var = opts.leaves;
  if (opts.depth > 0) rat.depth = opts.depth;
  if (rat.repetitions <= 0 || rat.sums_per_region <= 0 || rat.leaves_per_var <= 0 || rat.depth <= 0)
    throw BadRegimeSpec(
        "roster does not match a builtin dataset; pass --repetitions/--sums/--leaves/--depth");

  const std::string run_id =
      opts.run_id.empty() ? "train-" + (matched.empty() ? std::string("custom") : matched)
                          : opts.run_id;
  const std::string started = iso_now();
  fs::create_directories(opts.out_dir);

  nlohmann::json regimes = nlohmann::json::array();
  for (const Dataset& d : roster.data) regimes.push_back(d.intervention.describe());

  nlohmann::json models = nlohmann::json::array();
  nlohmann::json outputs = nlohmann::json::array();
  nlohmann::json timing = nlohmann::json::array();
  for (std::uint64_t seed : opts.seeds) {
    rat.seed = seed;
    cfg.seed = seed;
    CircuitStructure s = build_rat(rat, roster.data[0].domains);
    TrainResult res = train(s, roster.data, cfg);
    const std::string ck_name = "model_seed" + std::to_string(seed) + ".ckpt";
    const std::string log_name = "trainlog_seed" + std::to_string(seed) + ".csv";
    nlohmann::json meta = {{"run_id", run_id},
                           {"seed", seed},
                           {"dataset", matched},
                           {"regimes", regimes}};
    save_checkpoint((fs::path(opts.out_dir) / ck_name).string(), s, res.gate, res.theta, meta);
    write_train_log((fs::path(opts.out_dir) / log_name).string(), res.log, run_id);
    models.push_back({{"seed", seed},
                      {"structure_hash", hash_hex(s.hash())},
                      {"checkpoint", ck_name},
                      {"train_log", log_name}});
    outputs.push_back(ck_name);
    timing.push_back(log_name);  // wall_ms column is not reproducible
  }

  nlohmann::json flags = opts.to_json();
  flags["run_id"] = run_id;
  write_manifest(opts.out_dir,
                 {{"command", "train"},
                  {"run_id", run_id},
                  {"tool_version", kToolVersion},
                  {"started", started},
                  {"finished", iso_now()},
                  {"config", flags},
                  {"resolved",
                   {{"dataset", matched},
                    {"epochs", cfg.epochs},
                    {"batch", cfg.batch_size},
                    {"lr", cfg.learning_rate},
                    {"hidden", cfg.hidden},
                    {"repetitions", rat.repetitions},
                    {"sums", rat.sums_per_region},
                    {"leaves", rat.leaves_per_var},
                    {"depth", rat.depth},
                    {"regimes", regimes}}},
                  {"seeds", opts.seeds},
                  {"models", models},
                  {"outputs", outputs},
                  {"timing_outputs", timing}});
}

void cmd_eval(const EvalOptions& opts) {
  static const std::vector<std::string> kModes = {"marginals", "jsd", "ate", "capacity", "runtime"};
  if (std::find(kModes.begin(), kModes.end(), opts.mode) == kModes.end())
    throw BadRegimeSpec("unknown eval mode '" + opts.mode + "'");
  const Scm scm = builtin_scm(opts.dataset);
  const std::string run_id =
      opts.run_id.empty() ? "eval-" + opts.mode + "-" + opts.dataset : opts.run_id;
  const std::string started = iso_now();
  fs::create_directories(opts.out_dir);

  nlohmann::json outputs = nlohmann::json::array();
  nlohmann::json timing = nlohmann::json::array();

  if (opts.mode == "marginals" || opts.mode == "jsd") {
    const std::vector<TrainedModel> models = load_models(opts.checkpoints, opts.mode);
    if (opts.roster_dir.empty()) throw BadRegimeSpec("mode '" + opts.mode + "' needs --roster");
    const LoadedRoster roster = load_roster_dir(opts.roster_dir);
    if (roster.data[0].names != scm.graph.names())
      throw ShapeMismatch("roster variables do not match dataset '" + opts.dataset + "'");
    std::vector<Intervention> ivs;
    for (const Dataset& d : roster.data) ivs.push_back(d.intervention);
    const auto ground = ground_truth_table(scm, ivs, opts.mc_n, opts.gt_seed);
    const std::vector<MarginalCell> cells = marginal_report(models, scm, ivs, ground);
    if (opts.mode == "marginals") {
      write_marginal_report((fs::path(opts.out_dir) / "marginal_report.csv").string(), cells,
                            run_id);
      write_marginal_curves_json((fs::path(opts.out_dir) / "marginal_curves.json").string(), cells,
                                 run_id);
      outputs.push_back("marginal_report.csv");
      outputs.push_back("marginal_curves.json");
    } else {
      // per-variable aggregate over regimes and seeds, in variable order
      std::ofstream f(fs::path(opts.out_dir) / "jsd_table.csv");
      if (!f) throw FormatError("cannot write jsd table");
      f << "# run " << run_id << "\n";
      f << "variable,jsd_mean,jsd_sd\n";
      for (const std::string& name : scm.graph.names()) {
        std::vector<double> pool;
        for (const MarginalCell& c : cells)
          if (c.variable == name) pool.insert(pool.end(), c.jsd.begin(), c.jsd.end());
        if (pool.empty()) continue;
        const double m = mean(pool);
        const double s = pool.size() > 1 ? std::sqrt(variance(pool)) : 0.0;
        f << name << "," << format_double(m) << "," << format_double(s) << "\n";
      }
      outputs.push_back("jsd_table.csv");
    }
  } else if (opts.mode == "ate") {
    const std::vector<TrainedModel> models = load_models(opts.checkpoints, opts.mode);
    if (opts.treatment.empty() || opts.outcome.empty())
      throw BadRegimeSpec("mode 'ate' needs --treatment and --outcome");
    AteRow row;
    row.treatment = opts.treatment;
    row.outcome = opts.outcome;
    row.oracle_ate = average_treatment_effect(scm, scm.graph.index_of(opts.treatment),
                                              scm.graph.index_of(opts.outcome));
    for (const TrainedModel& m : models)
      row.model.push_back(model_ate(m, scm, opts.treatment, opts.outcome));
    row.model_mean = mean(row.model);
    row.model_sd = row.model.size() > 1 ? std::sqrt(variance(row.model)) : 0.0;
    write_ate_report((fs::path(opts.out_dir) / "ate_report.csv").string(), {row}, run_id);
    outputs.push_back("ate_report.csv");
  } else if (opts.mode == "capacity") {
    const std::vector<Intervention> roster = default_roster(scm);
    const long long n = opts.n < 0 ? dataset_default_n(opts.dataset) : opts.n;
    if (n <= 0) throw BadRegimeSpec("sample count must be positive");
    if (opts.seeds.empty()) throw BadRegimeSpec("mode 'capacity' needs --seeds");
    const auto ground = ground_truth_table(scm, roster, opts.mc_n, opts.gt_seed);
    const std::vector<SweepResult> res =
        capacity_sweep(scm, roster, static_cast<int>(n), dataset_sweep(opts.dataset), opts.seeds,
                       dataset_default_train(opts.dataset), ground);
    write_sweep_report((fs::path(opts.out_dir) / "sweep_report.csv").string(), res, run_id);
    outputs.push_back("sweep_report.csv");
  } else {  // runtime
    if (opts.roster_dir.empty()) throw BadRegimeSpec("mode 'runtime' needs --roster");
    const LoadedRoster roster = load_roster_dir(opts.roster_dir);
    const TrainConfig cfg =
        match_builtin(roster.data[0].names).empty() ? TrainConfig{} : dataset_default_train(opts.dataset);
    std::vector<BenchRow> rows;
    for (RatConfig rat : dataset_sweep(opts.dataset)) {
      rat.seed = opts.seeds.empty() ? 0 : opts.seeds[0];
      const CircuitStructure s = build_rat(rat, roster.data[0].domains);
      for (BenchRow r : runtime_bench(s, roster.data, cfg, opts.passes)) {
        r.label = "w" + std::to_string(s.num_sum_weights()) + "_" + r.label;
        rows.push_back(std::move(r));
      }
    }
    write_bench_report((fs::path(opts.out_dir) / "bench_report.csv").string(), rows, run_id);
    timing.push_back("bench_report.csv");  // wall-clock content by nature
  }

  nlohmann::json flags = opts.to_json();
  flags["run_id"] = run_id;
  write_manifest(opts.out_dir, {{"command", "eval"},
                                {"run_id", run_id},
                                {"tool_version", kToolVersion},
                                {"started", started},
                                {"finished", iso_now()},
                                {"config", flags},
                                {"outputs", outputs},
                                {"timing_outputs", timing}});
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"interventional sum-product networks"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  const char* env_out = std::getenv("ISPN_OUT_DIR");
  const std::string default_out = env_out && *env_out ? env_out : ".";

  GenerateOptions g;
  g.out_dir = default_out;
  CLI::App* gen = app.add_subcommand("generate", "sample datasets for a regime roster");
  gen->add_option("dataset", g.dataset, "builtin dataset id")->required();
  gen->add_option("--regimes", g.regimes, "comma-separated regime specs (default roster if unset)");
  gen->add_option("--n", g.n, "samples per regime (dataset default if unset)");
  gen->add_option("--seed", g.seed, "base data seed");
  gen->add_option("--out", g.out_dir, "output directory");
  gen->add_option("--run-id", g.run_id, "run id for file headers");

  TrainOptions t;
  t.out_dir = default_out;
  CLI::App* tr = app.add_subcommand("train", "train one model per seed on a dataset roster");
  tr->add_option("--roster", t.roster_dir, "directory of dataset csv/json pairs")->required();
  tr->add_option("--out", t.out_dir, "output directory");
  tr->add_option("--seeds", t.seeds, "model seeds")->delimiter(',');
  tr->add_option("--epochs", t.epochs, "training epochs");
  tr->add_option("--batch", t.batch, "batch size");
  tr->add_option("--lr", t.lr, "learning rate");
  tr->add_option("--hidden", t.hidden, "gate hidden width");
  tr->add_option("--repetitions", t.repetitions, "circuit repetitions");
  tr->add_option("--sums", t.sums, "sums per region");
  tr->add_option("--leaves", t.leaves, "leaves per variable");
  tr->add_option("--depth", t.depth, "region split depth");
  tr->add_option("--run-id", t.run_id, "run id for file headers");

  EvalOptions e;
  e.out_dir = default_out;
  CLI::App* ev = app.add_subcommand("eval", "evaluate checkpoints / run ablations");
  ev->add_option("--mode", e.mode, "marginals|jsd|ate|capacity|runtime")->required();
  ev->add_option("--dataset", e.dataset, "builtin dataset id (ground truth)")->required();
  ev->add_option("--checkpoints", e.checkpoints, "checkpoint files")->delimiter(',');
  ev->add_option("--roster", e.roster_dir, "directory of dataset csv/json pairs");
  ev->add_option("--out", e.out_dir, "output directory");
  ev->add_option("--treatment", e.treatment, "treatment variable (ate)");
  ev->add_option("--outcome", e.outcome, "outcome variable (ate)");
  ev->add_option("--n", e.n, "training samples (capacity)");
  ev->add_option("--mc", e.mc_n, "ground-truth histogram samples");
  ev->add_option("--gt-seed", e.gt_seed, "ground-truth seed");
  ev->add_option("--seeds", e.seeds, "training seeds (capacity)")->delimiter(',');
  ev->add_option("--passes", e.passes, "bench repetitions (runtime)");
  ev->add_option("--run-id", e.run_id, "run id for file headers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed())
      cmd_generate(g);
    else if (tr->parsed())
      cmd_train(t);
    else
      cmd_eval(e);
    return 0;
  } catch (const BadRegimeSpec& ex) {
    std::fprintf(stderr, "usage error: %s\n", ex.what());
    return 2;
  } catch (const UnknownDataset& ex) {
    std::fprintf(stderr, "usage error: %s\n", ex.what());
    return 2;
  } catch (const Error& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
}

}  // namespace ispn
