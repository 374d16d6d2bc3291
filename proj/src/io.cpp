#include "disclocus/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace disclocus {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path sidecar(const fs::path& path, const std::string& suffix) { return fs::path(path.string() + suffix); }

namespace {

[[noreturn]] void parse_error(const fs::path& path, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line) + ": " + what);
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  return in;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(s);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

void strip_cr(std::string& s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
}

double parse_double(const std::string& s, const fs::path& path, std::size_t line) {
  if (s.empty()) parse_error(path, line, "empty number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  // Subnormals set ERANGE but round-trip exactly; only non-finite values are refused.
  if (end != s.c_str() + s.size() || !std::isfinite(v)) parse_error(path, line, "bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const fs::path& path, std::size_t line) {
  if (s.empty()) parse_error(path, line, "empty integer");
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) parse_error(path, line, "bad integer '" + s + "'");
  return static_cast<int>(v);
}

json header(const std::string& kind) { return json{{"schema", "disclocus." + kind}, {"version", kSchemaVersion}}; }

void check_header(const json& j, const std::string& kind, const fs::path& path) {
  if (!j.is_object() || !j.contains("schema") || j["schema"] != "disclocus." + kind)
    parse_error(path, 1, "not a disclocus " + kind + " file");
  if (!j.contains("version") || j["version"] != kSchemaVersion)
    parse_error(path, 1, "unsupported " + kind + " schema version " + (j.contains("version") ? j["version"].dump() : "(missing)"));
}

json read_json(const fs::path& path) {
  std::ifstream in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(1) << '\n';
  finish(out, path);
}

json to_json(const RVec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

RVec rvec_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const RVec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json to_json(const CVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

CVec cvec_from(const json& j) {
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = Complex(j[i].at(0).get<double>(), j[i].at(1).get<double>());
  return v;
}

json to_json(const RMat& m) {
  // Row-major.
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", flat}};
}

RMat rmat_from(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto flat = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(flat.size()) != rows * cols)
    throw Error(ErrorCode::ParseError, "matrix data has " + std::to_string(flat.size()) + " entries, expected " +
                                           std::to_string(rows * cols));
  RMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = flat[static_cast<std::size_t>(r * cols + c)];
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------

void write_dataset_csv(const fs::path& path, const std::vector<LabeledSample>& samples) {
  const Eigen::Index k = samples.empty() ? 0 : samples.front().p.size();
  std::ofstream out = open_out(path);
  for (Eigen::Index j = 0; j < k; ++j) out << "p_" << j + 1 << ',';
  out << "label,category,line_id\n";
  for (const auto& s : samples) {
    if (s.p.size() != k) throw Error(ErrorCode::DimensionMismatch, "samples of mixed dimension");
    for (Eigen::Index j = 0; j < k; ++j) out << format_double(s.p(j)) << ',';
    out << s.label << ',' << to_string(s.category) << ',' << s.line_id << '\n';
  }
  finish(out, path);
}

std::vector<LabeledSample> read_dataset_csv(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::string text;
  if (!std::getline(in, text)) parse_error(path, 1, "missing header");
  strip_cr(text);
  const auto head = split(text, ',');
  if (head.size() < 3 || head[head.size() - 3] != "label" || head[head.size() - 2] != "category" ||
      head.back() != "line_id")
    parse_error(path, 1, "header must be p_1,...,p_k,label,category,line_id");
  const std::size_t k = head.size() - 3;
  for (std::size_t j = 0; j < k; ++j)
    if (head[j] != "p_" + std::to_string(j + 1)) parse_error(path, 1, "expected column p_" + std::to_string(j + 1));

  std::vector<LabeledSample> samples;
  for (std::size_t line = 2; std::getline(in, text); ++line) {
    strip_cr(text);
    if (text.empty()) continue;
    const auto fields = split(text, ',');
    if (fields.size() != k + 3)
      parse_error(path, line, "expected " + std::to_string(k + 3) + " fields, got " + std::to_string(fields.size()));
    LabeledSample s;
    s.p.resize(static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) s.p(static_cast<Eigen::Index>(j)) = parse_double(fields[j], path, line);
    s.label = parse_int(fields[k], path, line);
    if (s.label < 0) parse_error(path, line, "negative label");
    try {
      s.category = parse_category(fields[k + 1]);
    } catch (const Error& e) {
      parse_error(path, line, e.what());
    }
    s.line_id = parse_int(fields[k + 2], path, line);
    samples.push_back(std::move(s));
  }
  return samples;
}

// ---------------------------------------------------------------------------

void write_solutions(const fs::path& path, const std::vector<LabeledSample>& samples) {
  std::ofstream out = open_out(path);
  json head = header("solutions");
  head["count"] = samples.size();
  out << head.dump() << '\n';
  for (std::size_t i = 0; i < samples.size(); ++i) {
    json rec{{"index", i}};
    if (samples[i].real_solutions) {
      json sols = json::array();
      for (const auto& x : *samples[i].real_solutions) sols.push_back(to_json(x));
      rec["solutions"] = std::move(sols);
    } else {
      rec["solutions"] = nullptr;
    }
    out << rec.dump() << '\n';
  }
  finish(out, path);
}

void read_solutions(const fs::path& path, std::vector<LabeledSample>& samples) {
  std::ifstream in = open_in(path);
  std::string text;
  auto parse_line = [&](std::size_t line) {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      parse_error(path, line, e.what());
    }
  };
  if (!std::getline(in, text)) parse_error(path, 1, "missing header");
  const json head = parse_line(1);
  check_header(head, "solutions", path);
  if (head.value("count", std::size_t{0}) != samples.size())
    parse_error(path, 1, "sidecar lists " + head.value("count", json()).dump() + " samples, dataset has " +
                             std::to_string(samples.size()));
  std::size_t seen = 0;
  for (std::size_t line = 2; std::getline(in, text); ++line) {
    strip_cr(text);
    if (text.empty()) continue;
    const json rec = parse_line(line);
    try {
      const auto i = rec.at("index").get<std::size_t>();
      if (i != seen) parse_error(path, line, "records out of order");
      const json& sols = rec.at("solutions");
      if (!sols.is_null()) {
        std::vector<RVec> xs;
        for (const auto& x : sols) xs.push_back(rvec_from(x));
        if (static_cast<int>(xs.size()) != samples[i].label)
          parse_error(path, line, "solution count does not match label");
        samples[i].real_solutions = std::move(xs);
      }
    } catch (const json::exception& e) {
      parse_error(path, line, e.what());
    }
    if (++seen > samples.size()) parse_error(path, line, "more records than samples");
  }
  if (seen != samples.size()) parse_error(path, seen + 1, "sidecar is truncated");
}

// ---------------------------------------------------------------------------

void write_lines(const fs::path& path, const std::vector<WitnessLine>& lines) {
  json j = header("lines");
  json arr = json::array();
  for (const auto& l : lines)
    arr.push_back({{"p_star", to_json(l.p_star)},
                   {"v", to_json(l.v)},
                   {"lambdas", l.lambdas},
                   {"lambda_enter", l.lambda_enter},
                   {"lambda_exit", l.lambda_exit},
                   {"degree_observed", l.degree_observed}});
  j["lines"] = std::move(arr);
  write_json(path, j);
}

std::vector<WitnessLine> read_lines(const fs::path& path) {
  const json j = read_json(path);
  check_header(j, "lines", path);
  std::vector<WitnessLine> out;
  try {
    for (const auto& l : j.at("lines")) {
      WitnessLine w;
      w.p_star = rvec_from(l.at("p_star"));
      w.v = rvec_from(l.at("v"));
      w.lambdas = l.at("lambdas").get<std::vector<double>>();
      w.lambda_enter = l.at("lambda_enter").get<double>();
      w.lambda_exit = l.at("lambda_exit").get<double>();
      w.degree_observed = l.at("degree_observed").get<int>();
      out.push_back(std::move(w));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------

void write_generic_start(const fs::path& path, const GenericStart& start, const std::string& model) {
  json j = header("start");
  j["model"] = model;
  j["d"] = start.d;
  j["seed"] = start.seed;
  j["p0"] = to_json(start.p0);
  json sols = json::array();
  for (const auto& x : start.solutions) sols.push_back(to_json(x));
  j["solutions"] = std::move(sols);
  write_json(path, j);
}

GenericStart read_generic_start(const fs::path& path, const std::string& model) {
  const json j = read_json(path);
  check_header(j, "start", path);
  GenericStart s;
  try {
    if (j.at("model").get<std::string>() != model)
      throw Error(ErrorCode::ParseError, path.string() + ": start system belongs to model '" +
                                             j.at("model").get<std::string>() + "', not '" + model + "'");
    s.d = j.at("d").get<int>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.p0 = cvec_from(j.at("p0"));
    for (const auto& x : j.at("solutions")) s.solutions.push_back(cvec_from(x));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  if (static_cast<int>(s.solutions.size()) != s.d)
    throw Error(ErrorCode::ParseError, path.string() + ": solution count does not match d");
  return s;
}

// ---------------------------------------------------------------------------

void write_classifier(const fs::path& path, const Classifier& model) {
  json j = header("classifier");
  if (const auto* knn = std::get_if<KnnModel>(&model)) {
    j["type"] = "knn";
    j["K"] = knn->K;
    j["points"] = to_json(knn->points);
    j["labels"] = knn->labels;
  } else {
    const auto& mlp = std::get<MlpModel>(model);
    j["type"] = "mlp";
    j["layer_sizes"] = mlp.layer_sizes;
    json acts = json::array();
    for (auto a : mlp.activations) acts.push_back(to_string(a));
    j["activations"] = std::move(acts);
    j["class_map"] = mlp.class_map;
    json layers = json::array();
    for (std::size_t l = 0; l < mlp.weights.size(); ++l)
      layers.push_back({{"weights", to_json(mlp.weights[l])}, {"bias", to_json(mlp.biases[l])}});
    j["layers"] = std::move(layers);
    j["train_accuracy"] = mlp.train_accuracy;
    j["epochs"] = mlp.epochs;
    j["separated"] = mlp.separated;
  }
  write_json(path, j);
}

Classifier read_classifier(const fs::path& path) {
  const json j = read_json(path);
  check_header(j, "classifier", path);
  try {
    const auto type = j.at("type").get<std::string>();
    if (type == "knn") {
      KnnModel m;
      m.K = j.at("K").get<int>();
      m.points = rmat_from(j.at("points"));
      m.labels = j.at("labels").get<std::vector<int>>();
      if (static_cast<Eigen::Index>(m.labels.size()) != m.points.cols() || m.K < 1 ||
          static_cast<std::size_t>(m.K) > m.labels.size())
        throw Error(ErrorCode::ParseError, path.string() + ": inconsistent knn model");
      return m;
    }
    if (type != "mlp") throw Error(ErrorCode::ParseError, path.string() + ": unknown classifier type '" + type + "'");
    MlpModel m;
    m.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    for (const auto& a : j.at("activations")) m.activations.push_back(parse_activation(a.get<std::string>()));
    m.class_map = j.at("class_map").get<std::vector<int>>();
    for (const auto& layer : j.at("layers")) {
      m.weights.push_back(rmat_from(layer.at("weights")));
      m.biases.push_back(rvec_from(layer.at("bias")));
    }
    m.train_accuracy = j.value("train_accuracy", 0.0);
    m.epochs = j.value("epochs", 0L);
    m.separated = j.value("separated", false);
    const std::size_t L = m.layer_sizes.size();
    bool ok = L >= 2 && m.weights.size() == L - 1 && m.biases.size() == L - 1 && m.activations.size() == L - 2 &&
              static_cast<std::size_t>(m.layer_sizes.back()) == m.class_map.size();
    for (std::size_t l = 0; ok && l + 1 < L; ++l)
      ok = m.weights[l].rows() == m.layer_sizes[l + 1] && m.weights[l].cols() == m.layer_sizes[l] &&
           m.biases[l].size() == m.layer_sizes[l + 1] && m.weights[l].allFinite() && m.biases[l].allFinite();
    if (!ok) throw Error(ErrorCode::ParseError, path.string() + ": layer dimensions do not chain");
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

void write_grid_csv(const fs::path& path, const Grid& grid) {
  std::ofstream out = open_out(path);
  out << "p_1,p_2,label\n";
  for (int r = 0; r < grid.resolution; ++r)
    for (int c = 0; c < grid.resolution; ++c)
      out << format_double(grid.x_center(c)) << ',' << format_double(grid.y_center(r)) << ',' << grid.at(r, c)
          << '\n';
  finish(out, path);
}

void write_grid_ppm(const fs::path& path, const Grid& grid) {
  std::ofstream out = open_out(path);
  out << "P6\n" << grid.resolution << ' ' << grid.resolution << "\n255\n";
  std::vector<char> row(static_cast<std::size_t>(grid.resolution) * 3);
  for (int r = grid.resolution - 1; r >= 0; --r) {
    for (int c = 0; c < grid.resolution; ++c) {
      const int label = grid.at(r, c);
      const auto it = std::lower_bound(grid.class_map.begin(), grid.class_map.end(), label);
      const Rgb rgb = palette_color(static_cast<std::size_t>(it - grid.class_map.begin()));
      for (int ch = 0; ch < 3; ++ch) row[static_cast<std::size_t>(c) * 3 + ch] = static_cast<char>(rgb[ch]);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  finish(out, path);
}

void write_benchmark_csv(const fs::path& path, const BenchmarkSummary& summary) {
  std::ofstream out = open_out(path);
  out << "tracked_paths,count,avg_seconds,success_rate\n";
  for (const auto& r : summary.rows)
    out << r.tracked_paths << ',' << r.count << ',' << format_double(r.avg_seconds) << ','
        << format_double(r.success_rate) << '\n';
  finish(out, path);
}

void append_results_row(const fs::path& path, const std::string& row_name, const std::vector<std::string>& test_names,
                        const std::vector<double>& accuracies) {
  if (test_names.size() != accuracies.size())
    throw Error(ErrorCode::DimensionMismatch, "one accuracy per test set expected");
  std::string expected = "train";
  for (const auto& t : test_names) expected += "," + t;
  if (fs::exists(path) && fs::file_size(path) > 0) {
    std::ifstream in = open_in(path);
    std::string head;
    std::getline(in, head);
    strip_cr(head);
    if (head != expected) parse_error(path, 1, "results header '" + head + "' does not match '" + expected + "'");
  } else {
    std::ofstream out = open_out(path);
    out << expected << '\n';
    finish(out, path);
  }
  std::ofstream out = open_out(path, std::ios::app);
  out << row_name;
  char buf[32];
  for (double a : accuracies) {
    std::snprintf(buf, sizeof buf, ",%.4f", a);
    out << buf;
  }
  out << '\n';
  finish(out, path);
}

}  // namespace disclocus
