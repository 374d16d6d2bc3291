// disclocus: sample, label, learn and exploit the real discriminant locus of a
// parameterized polynomial system.

#include "disclocus/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace disclocus;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("DISCLOCUS_SEED")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) return v;
    throw Error(ErrorCode::ParseError, std::string("DISCLOCUS_SEED is not an integer: '") + env + "'");
  }
  return 0;
}

// Options shared by every command that builds a system.
struct SystemOpts {
  std::string model;
  std::string system_file;
  std::vector<double> box;
  double tol_im = 1e-6;
  int jobs = 1;

  void add(CLI::App* cmd, bool with_box = true) {
    cmd->add_option("--model", model, "Built-in model: quadratic, cubic, conjsquare, kuramotoN");
    cmd->add_option("--system", system_file, "Polynomial system file (one equation per line)");
    if (with_box) cmd->add_option("--box", box, "Parameter box: lo_1 hi_1 lo_2 hi_2 ...");
    cmd->add_option("--tol-im", tol_im, "Imaginary-part tolerance for counting real solutions");
    cmd->add_option("--jobs", jobs, "Worker threads (default serial)")->check(CLI::PositiveNumber);
  }
};

struct Model {
  ModelId id;
  std::string name;
  ParameterizedSystem sys;
  Box box;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Model load_model(const SystemOpts& o) {
  if (o.model.empty() == o.system_file.empty())
    throw Error(ErrorCode::ParseError, "give exactly one of --model or --system");
  Model m{.id = {}, .name = {}, .sys = quadratic_system(), .box = {}};
  if (!o.system_file.empty()) {
    m.id = ModelId::parse("custom");
    m.sys = parse_system(read_text(o.system_file), o.system_file);
    m.name = "custom";
  } else {
    m.id = ModelId::parse(o.model);
    m.sys = build_model(m.id);
    m.name = m.id.name();
  }
  if (o.box.empty()) {
    m.box = default_box(m.id);
  } else {
    if (o.box.size() % 2 != 0) throw Error(ErrorCode::ParseError, "--box needs lo/hi pairs");
    const auto k = static_cast<Eigen::Index>(o.box.size() / 2);
    m.box.lo.resize(k);
    m.box.hi.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      m.box.lo(j) = o.box[static_cast<std::size_t>(2 * j)];
      m.box.hi(j) = o.box[static_cast<std::size_t>(2 * j + 1)];
      if (!(m.box.lo(j) < m.box.hi(j))) throw Error(ErrorCode::ParseError, "--box has an empty interval");
    }
  }
  if (m.box.dim() != m.sys.k())
    throw Error(ErrorCode::DimensionMismatch, "box has dimension " + std::to_string(m.box.dim()) + ", system has " +
                                                  std::to_string(m.sys.k()) + " parameters");
  return m;
}

SolverSettings solver_settings(const SystemOpts& o) {
  SolverSettings s;
  s.tol_im = o.tol_im;
  s.jobs = 1;
  return s;
}

json box_json(const Box& b) {
  json out = json::array();
  for (Eigen::Index j = 0; j < b.dim(); ++j) out.push_back({b.lo(j), b.hi(j)});
  return out;
}

std::vector<Category> parse_categories(const std::string& text) {
  std::vector<Category> out;
  if (text == "all") return {Category::Uniform, Category::NearCenter, Category::NearBoundary};
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, text.find('+') != std::string::npos ? '+' : ','))
    if (!item.empty()) out.push_back(parse_category(item));
  if (out.empty()) throw Error(ErrorCode::ParseError, "empty category list");
  return out;
}

RVec parse_point(const std::string& text) {
  std::vector<double> v;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    char* end = nullptr;
    v.push_back(std::strtod(item.c_str(), &end));
    if (item.empty() || *end != '\0') throw Error(ErrorCode::ParseError, "bad point '" + text + "'");
  }
  return Eigen::Map<RVec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json vec_json(const RVec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// Run manifest written beside the primary output; timing fields make it the one
// output that is not byte-reproducible.
struct Manifest {
  json j;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  Manifest(const std::string& command, std::uint64_t seed) {
    j = {{"schema", "disclocus.manifest"},
         {"version", kSchemaVersion},
         {"tool_version", kToolVersion},
         {"command", command},
         {"seed", seed},
         {"config", json::object()},
         {"inputs", json::array()},
         {"outputs", json::array()}};
  }
  void write(const fs::path& primary) {
    j["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const fs::path path = sidecar(primary, ".manifest.json");
    std::ofstream out(path, std::ios::binary);
    out << j.dump(1) << '\n';
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
};

// Dataset plus its sidecars.
std::vector<LabeledSample> load_dataset(const fs::path& path, bool need_solutions) {
  auto samples = read_dataset_csv(path);
  const fs::path sol = sidecar(path, ".solutions.jsonl");
  if (fs::exists(sol))
    read_solutions(sol, samples);
  else if (need_solutions)
    throw Error(ErrorCode::IoError, path.string() + " has no solutions sidecar; regenerate with --store-solutions");
  return samples;
}

// ---------------------------------------------------------------------------

struct GenerateOpts {
  SystemOpts sys;
  double alpha = 0.01;
  int uniform = 1000;
  int lines = 0;
  double min_interval = 1e-4;
  std::uint64_t seed = 0;
  bool store = false;
  std::string out = "dataset.csv";
};

int cmd_generate(const GenerateOpts& o) {
  const Model m = load_model(o.sys);
  Manifest man("generate", o.seed);
  SamplerConfig cfg;
  cfg.omega = m.box;
  cfg.alpha = o.alpha;
  cfg.n_uniform = o.uniform;
  cfg.n_lines = o.lines;
  cfg.min_interval = o.min_interval;
  cfg.seed = o.seed;
  cfg.store_solutions = o.store;
  cfg.jobs = o.sys.jobs;
  cfg.solver = solver_settings(o.sys);
  if (!(cfg.alpha > 0)) throw Error(ErrorCode::ParseError, "--alpha must be positive");

  const Starts starts = prepare_starts(m.sys, cfg, cfg.n_lines > 0);
  const Dataset ds = generate_dataset(m.sys, starts, cfg);

  const fs::path out = o.out;
  write_dataset_csv(out, ds.samples);
  write_generic_start(sidecar(out, ".start.json"), starts.start, m.name);
  write_lines(sidecar(out, ".lines.json"), ds.lines);
  man.j["outputs"] = {out.string(), sidecar(out, ".start.json").string(), sidecar(out, ".lines.json").string()};
  if (o.store) {
    write_solutions(sidecar(out, ".solutions.jsonl"), ds.samples);
    man.j["outputs"].push_back(sidecar(out, ".solutions.jsonl").string());
  }
  man.j["model"] = m.name;
  if (!o.sys.system_file.empty()) man.j["inputs"].push_back(o.sys.system_file);
  man.j["config"] = {{"box", box_json(m.box)},     {"alpha", cfg.alpha},         {"uniform", cfg.n_uniform},
                     {"lines", cfg.n_lines},       {"min_interval", cfg.min_interval},
                     {"tol_im", cfg.solver.tol_im}, {"store_solutions", cfg.store_solutions},
                     {"jobs", cfg.jobs},           {"generic_d", ds.generic_d}};
  man.write(out);

  std::map<Category, int> cats;
  std::map<int, int> labels;
  for (const auto& s : ds.samples) {
    ++cats[s.category];
    ++labels[s.label];
  }
  std::cout << "model " << m.name << " generic_d " << ds.generic_d << '\n';
  for (auto c : {Category::Uniform, Category::NearCenter, Category::NearBoundary})
    std::cout << to_string(c) << ' ' << cats[c] << '\n';
  std::cout << "labels";
  for (const auto& [l, n] : labels) std::cout << ' ' << l << ':' << n;
  std::cout << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainOpts {
  std::vector<std::string> data;
  std::string categories = "all";
  std::string classifier = "knn";
  int knn_k = 1;
  std::vector<int> arch{20, 20, 20};
  std::string activation = "tanh";
  std::string optimizer = "adam";
  double lr = 1e-2;
  long max_epochs = 50000;
  int minibatch = 0;
  std::uint64_t seed = 0;
  std::string out = "model.json";
};

int cmd_train(const TrainOpts& o) {
  Manifest man("train", o.seed);
  const auto cats = parse_categories(o.categories);
  std::vector<LabeledSample> samples;
  for (const auto& path : o.data) {
    auto part = filter(read_dataset_csv(path), cats);
    samples.insert(samples.end(), part.begin(), part.end());
    man.j["inputs"].push_back(path);
  }
  if (samples.empty()) throw Error(ErrorCode::EmptyBank, "no training samples in the selected categories");
  const LabeledPoints data = LabeledPoints::from_samples(samples);

  Classifier model;
  if (o.classifier == "knn") {
    model = knn_fit(data, o.knn_k);
    man.j["config"] = {{"classifier", "knn"}, {"K", o.knn_k}};
    std::cout << "knn K=" << o.knn_k << " points " << data.size() << '\n';
  } else if (o.classifier == "mlp") {
    MlpSpec arch{o.arch, parse_activation(o.activation)};
    TrainConfig tc;
    tc.lr_init = o.lr;
    tc.max_epochs = o.max_epochs;
    tc.minibatch = o.minibatch;
    tc.seed = o.seed;
    tc.optimizer = parse_optimizer(o.optimizer);
    MlpModel mlp = mlp_train(data, arch, tc);
    man.j["config"] = {{"classifier", "mlp"},
                       {"arch", o.arch},
                       {"activation", to_string(arch.activation)},
                       {"optimizer", to_string(tc.optimizer)},
                       {"lr_init", tc.lr_init},
                       {"lr_decay", tc.lr_decay},
                       {"plateau_tol", tc.plateau_tol},
                       {"plateau_epochs", tc.plateau_epochs},
                       {"max_epochs", tc.max_epochs},
                       {"minibatch", tc.minibatch},
                       {"train_accuracy", mlp.train_accuracy},
                       {"epochs", mlp.epochs},
                       {"separated", mlp.separated}};
    std::cout << "mlp points " << data.size() << " train_accuracy " << mlp.train_accuracy << " epochs " << mlp.epochs
              << (mlp.separated ? "" : " (did not separate)") << '\n';
    model = std::move(mlp);
  } else {
    throw Error(ErrorCode::ParseError, "unknown classifier '" + o.classifier + "' (knn or mlp)");
  }
  man.j["config"]["categories"] = o.categories;
  write_classifier(o.out, model);
  man.j["outputs"] = {o.out};
  man.write(o.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalOpts {
  std::string classifier;
  std::vector<std::string> tests;
  std::string train_name;
  std::string results;
};

int cmd_eval(const EvalOpts& o) {
  const Classifier model = read_classifier(o.classifier);
  std::vector<std::string> names;
  std::vector<double> acc;
  for (const auto& spec : o.tests) {
    // NAME=PATH[@cat+cat]
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "--test expects NAME=PATH[@categories]");
    const std::string name = spec.substr(0, eq);
    std::string path = spec.substr(eq + 1);
    std::vector<Category> cats{Category::Uniform, Category::NearCenter, Category::NearBoundary};
    if (const auto at = path.rfind('@'); at != std::string::npos) {
      cats = parse_categories(path.substr(at + 1));
      path = path.substr(0, at);
    }
    const auto samples = filter(read_dataset_csv(path), cats);
    if (samples.empty()) throw Error(ErrorCode::EmptyBank, "test set '" + name + "' is empty");
    const double a = evaluate_accuracy(model, LabeledPoints::from_samples(samples));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", a);
    std::cout << name << ' ' << buf << " (" << samples.size() << " points)\n";
    names.push_back(name);
    acc.push_back(a);
  }
  if (!o.results.empty()) {
    const std::string row = o.train_name.empty() ? fs::path(o.classifier).stem().string() : o.train_name;
    append_results_row(o.results, row, names, acc);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct GridOpts {
  SystemOpts sys;
  std::string classifier;
  std::vector<int> axes{0, 1};
  std::vector<double> fixed;
  int resolution = 512;
  std::string out = "grid.csv";
  std::string ppm;
};

int cmd_grid(const GridOpts& o) {
  Manifest man("grid", 0);
  const Classifier model = read_classifier(o.classifier);
  Box box;
  if (!o.sys.model.empty() || !o.sys.system_file.empty()) {
    box = load_model(o.sys).box;
  } else {
    if (o.sys.box.size() < 4 || o.sys.box.size() % 2) throw Error(ErrorCode::ParseError, "--grid needs --box or --model");
    SystemOpts tmp = o.sys;
    const auto k = static_cast<Eigen::Index>(tmp.box.size() / 2);
    box.lo.resize(k);
    box.hi.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      box.lo(j) = tmp.box[static_cast<std::size_t>(2 * j)];
      box.hi(j) = tmp.box[static_cast<std::size_t>(2 * j + 1)];
    }
  }
  if (o.resolution < 2) throw Error(ErrorCode::ParseError, "--resolution must be at least 2");
  if (o.axes.size() != 2) throw Error(ErrorCode::ParseError, "--axes takes two indices");
  GridSpec spec;
  spec.box = box;
  spec.axis_x = o.axes[0];
  spec.axis_y = o.axes[1];
  spec.resolution = o.resolution;
  spec.fixed = o.fixed.empty() ? RVec(((box.lo + box.hi) / 2.0).eval())
                               : RVec(Eigen::Map<const RVec>(o.fixed.data(), static_cast<Eigen::Index>(o.fixed.size())));
  if (spec.fixed.size() != box.dim()) throw Error(ErrorCode::DimensionMismatch, "--fixed needs one value per parameter");
  const Grid grid = decision_grid(model, spec);
  write_grid_csv(o.out, grid);
  man.j["outputs"] = {o.out};
  if (!o.ppm.empty()) {
    write_grid_ppm(o.ppm, grid);
    man.j["outputs"].push_back(o.ppm);
  }
  man.j["inputs"] = {o.classifier};
  man.j["config"] = {{"box", box_json(box)},
                     {"axes", o.axes},
                     {"fixed", vec_json(spec.fixed)},
                     {"resolution", o.resolution}};
  man.write(o.out);
  std::map<int, long> counts;
  for (int l : grid.labels) ++counts[l];
  std::cout << "grid " << o.resolution << 'x' << o.resolution;
  for (const auto& [l, n] : counts) std::cout << ' ' << l << ':' << n;
  std::cout << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct RealOpts {
  SystemOpts sys;
  std::string data;
  std::string start;
  std::string bank_categories = "uniform,near_center";
  std::vector<std::string> points;
  int queries = 0;
  int trials = 1;
  bool verify = false;
  std::uint64_t seed = 0;
  std::string out;
};

struct RealContext {
  Model m;
  GenericStart start;
  SeedBank bank;
  SolverSettings s;
};

RealContext real_context(const RealOpts& o) {
  RealContext c{load_model(o.sys), {}, {}, solver_settings(o.sys)};
  c.s.jobs = o.sys.jobs;
  const fs::path start_path = o.start.empty() ? sidecar(o.data, ".start.json") : fs::path(o.start);
  c.start = read_generic_start(start_path, c.m.name);
  c.bank = build_seed_bank(load_dataset(o.data, true), parse_categories(o.bank_categories));
  if (c.bank.empty()) throw Error(ErrorCode::EmptyBank, "no samples with stored solutions in the selected categories");
  if (c.bank.points.rows() != c.m.sys.k()) throw Error(ErrorCode::DimensionMismatch, "dataset does not match the system");
  return c;
}

std::vector<RVec> query_points(const RealOpts& o, const Box& box) {
  std::vector<RVec> out;
  for (const auto& p : o.points) out.push_back(parse_point(p));
  Rng rng = make_rng(o.seed, Stream::Query);
  for (int i = 0; i < o.queries; ++i) out.push_back(box.sample(rng));
  return out;
}

int cmd_solve_real(const RealOpts& o) {
  const RealContext c = real_context(o);
  const auto queries = query_points(o, c.m.box);
  if (queries.empty()) throw Error(ErrorCode::ParseError, "give --point or --queries");
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (queries[i].size() != c.m.sys.k()) throw Error(ErrorCode::DimensionMismatch, "query has the wrong dimension");
    Rng rng = make_rng(o.seed, Stream::RealSolve, i);
    const RealSolveReport r = solve_real(c.m.sys, c.start, c.bank, queries[i], o.verify, rng, c.s);
    json sols = json::array();
    for (const auto& x : r.solutions) sols.push_back(vec_json(x));
    json rec{{"p", vec_json(r.p)},
             {"p_star", vec_json(r.p_star)},
             {"tracked", r.tracked},
             {"status", to_string(r.status)},
             {"count", r.solutions.size()},
             {"solutions", sols},
             {"elapsed", r.elapsed}};
    if (r.full_count >= 0) {
      rec["full_count"] = r.full_count;
      rec["full_elapsed"] = r.full_elapsed;
    }
    std::cout << rec.dump() << '\n';
  }
  return 0;
}

int cmd_benchmark(const RealOpts& o) {
  Manifest man("benchmark", o.seed);
  const RealContext c = real_context(o);
  const auto queries = query_points(o, c.m.box);
  if (queries.empty()) throw Error(ErrorCode::ParseError, "give --point or --queries");
  const BenchmarkSummary b = benchmark_real(c.m.sys, c.start, c.bank, queries, o.trials, o.seed, c.s);
  std::cout << "tracked_paths,count,avg_seconds,success_rate\n";
  for (const auto& r : b.rows)
    std::cout << r.tracked_paths << ',' << r.count << ',' << format_double(r.avg_seconds) << ','
              << format_double(r.success_rate) << '\n';
  std::cout << "queries " << b.queries << " zero_seed " << b.zero_seed_queries << " fallbacks " << b.fallbacks
            << " mean_tracked " << b.mean_tracked << " generic_d " << c.start.d << '\n';
  std::cout << "real_avg_seconds " << b.real_avg_seconds << " full_avg_seconds " << b.full_avg_seconds;
  if (b.real_avg_seconds > 0) std::cout << " speedup " << b.full_avg_seconds / b.real_avg_seconds;
  std::cout << '\n';
  if (!o.out.empty()) {
    write_benchmark_csv(o.out, b);
    man.j["model"] = c.m.name;
    man.j["inputs"] = {o.data};
    man.j["outputs"] = {o.out};
    man.j["config"] = {{"queries", b.queries}, {"trials", o.trials}, {"bank_categories", o.bank_categories},
                       {"bank_size", c.bank.samples.size()}, {"tol_im", c.s.tol_im}};
    man.write(o.out);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct WitnessOpts {
  SystemOpts sys;
  std::uint64_t seed = 0;
  int line_id = 0;
  std::string point;
  std::string direction;
};

int cmd_witness(const WitnessOpts& o) {
  const Model m = load_model(o.sys);
  SolverSettings s = solver_settings(o.sys);
  s.jobs = o.sys.jobs;
  const CriticalSystem crit = make_critical_system(m.sys);
  const GenericStart cstart = critical_generic_start(crit, o.seed, s);
  Rng rng = make_rng(o.seed, Stream::Witness, o.line_id);
  const RVec p = o.point.empty() ? m.box.sample(rng) : parse_point(o.point);
  RVec v;
  if (o.direction.empty()) {
    v.resize(p.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = gaussian(rng);
  } else {
    v = parse_point(o.direction);
  }
  if (p.size() != m.sys.k() || v.size() != m.sys.k())
    throw Error(ErrorCode::DimensionMismatch, "point and direction need one value per parameter");
  if (v.norm() == 0.0) throw Error(ErrorCode::ParseError, "direction must be nonzero");
  v /= v.norm();
  const WitnessLine w = witness_on_line(crit, cstart, p, v, m.box, rng, s);
  std::cout << "p_star";
  for (Eigen::Index j = 0; j < p.size(); ++j) std::cout << ' ' << format_double(p(j));
  std::cout << "\ndirection";
  for (Eigen::Index j = 0; j < v.size(); ++j) std::cout << ' ' << format_double(v(j));
  std::cout << "\nlambda_enter " << format_double(w.lambda_enter) << "\nlambda_exit " << format_double(w.lambda_exit)
            << "\nlambdas";
  for (double l : w.lambdas) std::cout << ' ' << format_double(l);
  std::cout << "\ncritical_start_size " << cstart.d << "\ndegree_observed " << w.degree_observed << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn the real discriminant locus of a parameterized polynomial system"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  GenerateOpts gen;
  gen.seed = seed;
  auto* g = app.add_subcommand("generate", "Sample and label a dataset");
  gen.sys.add(g);
  g->add_option("--alpha", gen.alpha, "Near-boundary offset cap");
  g->add_option("--uniform", gen.uniform, "Uniform samples")->check(CLI::NonNegativeNumber);
  g->add_option("--lines", gen.lines, "Random witness lines")->check(CLI::NonNegativeNumber);
  g->add_option("--min-interval", gen.min_interval, "Drop line intervals shorter than this");
  g->add_option("--seed", gen.seed, "Master seed (default $DISCLOCUS_SEED or 0)");
  g->add_flag("--store-solutions", gen.store, "Write the real solutions of every labeled sample");
  g->add_option("-o,--out", gen.out, "Dataset CSV path");

  TrainOpts tr;
  tr.seed = seed;
  auto* t = app.add_subcommand("train", "Fit a K-NN or MLP classifier");
  t->add_option("--data", tr.data, "Dataset CSV (repeatable)")->required();
  t->add_option("--categories", tr.categories, "Categories to train on, e.g. near_boundary+near_center, or all");
  t->add_option("--classifier", tr.classifier, "knn or mlp");
  t->add_option("--knn-k", tr.knn_k, "Neighbours for K-NN")->check(CLI::PositiveNumber);
  t->add_option("--arch", tr.arch, "Hidden layer widths h1,h2,...")->delimiter(',');
  t->add_option("--activation", tr.activation, "relu or tanh");
  t->add_option("--optimizer", tr.optimizer, "adam or gd");
  t->add_option("--lr", tr.lr, "Initial learning rate");
  t->add_option("--max-epochs", tr.max_epochs, "Epoch limit");
  t->add_option("--minibatch", tr.minibatch, "Minibatch size (0 = full batch)");
  t->add_option("--seed", tr.seed, "Initialization seed");
  t->add_option("-o,--out", tr.out, "Model file");

  EvalOpts ev;
  auto* e = app.add_subcommand("eval", "Accuracy of a model on test datasets");
  e->add_option("--classifier", ev.classifier, "Model file")->required();
  e->add_option("--test", ev.tests, "NAME=PATH[@categories] (repeatable)")->required();
  e->add_option("--train-name", ev.train_name, "Row name in the results table");
  e->add_option("--results", ev.results, "Append a row to this train-by-test CSV");

  GridOpts gr;
  auto* gd = app.add_subcommand("grid", "Decision grid as CSV and PPM");
  gr.sys.add(gd);
  gd->add_option("--classifier", gr.classifier, "Model file")->required();
  gd->add_option("--axes", gr.axes, "Parameter indices for x and y")->delimiter(',');
  gd->add_option("--fixed", gr.fixed, "Values of the remaining parameters")->delimiter(',');
  gd->add_option("--resolution", gr.resolution, "Cells per axis");
  gd->add_option("-o,--out", gr.out, "Grid CSV path");
  gd->add_option("--ppm", gr.ppm, "Also write a P6 image");

  RealOpts sr;
  sr.seed = seed;
  auto add_real = [&](CLI::App* cmd, RealOpts& o) {
    o.sys.add(cmd);
    cmd->add_option("--data", o.data, "Dataset with a solutions sidecar")->required();
    cmd->add_option("--start", o.start, "Generic start file (default <data>.start.json)");
    cmd->add_option("--bank-categories", o.bank_categories, "Seed categories, e.g. uniform,near_center or all");
    cmd->add_option("--point", o.points, "Query point p1,p2,... (repeatable)");
    cmd->add_option("--queries", o.queries, "Uniform random queries over the box");
    cmd->add_option("--seed", o.seed, "Seed for queries and verification");
  };
  auto* s = app.add_subcommand("solve-real", "Real solutions by tracking from the nearest seed");
  add_real(s, sr);
  s->add_flag("--verify", sr.verify, "Also run the complex homotopy and compare");

  RealOpts bm;
  bm.seed = seed;
  bm.queries = 200;
  auto* b = app.add_subcommand("benchmark", "Success rate and timing of the real-path homotopy");
  add_real(b, bm);
  b->add_option("--trials", bm.trials, "Solves per query")->check(CLI::PositiveNumber);
  b->add_option("-o,--out", bm.out, "Bucket table CSV");

  WitnessOpts wi;
  wi.seed = seed;
  auto* w = app.add_subcommand("witness", "Discriminant intersections with one random real line");
  wi.sys.add(w);
  w->add_option("--seed", wi.seed, "Seed");
  w->add_option("--line-id", wi.line_id, "Line counter within the seed");
  w->add_option("--point", wi.point, "Anchor p1,p2,... (default random in the box)");
  w->add_option("--direction", wi.direction, "Direction v1,v2,... (default random)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*t) return cmd_train(tr);
    if (*e) return cmd_eval(ev);
    if (*gd) return cmd_grid(gr);
    if (*s) return cmd_solve_real(sr);
    if (*b) return cmd_benchmark(bm);
    if (*w) return cmd_witness(wi);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
