#include "iclust/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "iclust/errors.hpp"

namespace iclust {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse_double(const std::string& s, double& value) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto res = std::from_chars(begin, end, value);
  return res.ec == std::errc{} && res.ptr == end;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // row-major cells
};

CsvTable read_csv(const std::string& path) {
  auto in = open_input(path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty CSV file: " + path);
  table.header = split_csv_line(line);
  const std::size_t p = table.header.size();
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != p)
      throw InputError("CSV row with " + std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(p) + ": " + path);
    table.rows.push_back(std::move(cells));
  }
  if (table.rows.empty()) throw InputError("CSV file has no data rows: " + path);
  return table;
}

}  // namespace

std::shared_ptr<ContinuousData> read_continuous_csv(const std::string& path) {
  CsvTable table = read_csv(path);
  const int n = static_cast<int>(table.rows.size());
  const int p = static_cast<int>(table.header.size());
  auto data = std::make_shared<ContinuousData>();
  data->columns = table.header;
  data->x.resize(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      double v;
      if (!parse_double(table.rows[i][j], v))
        throw InputError("non-numeric cell '" + table.rows[i][j] + "' in " + path);
      data->x(i, j) = v;
    }
  }
  return data;
}

void write_continuous_csv(const ContinuousData& data, const std::string& path) {
  auto out = open_output(path);
  out.precision(17);
  for (int j = 0; j < data.p(); ++j) out << (j ? "," : "") << data.columns[j];
  out << '\n';
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.p(); ++j) out << (j ? "," : "") << data.x(i, j);
    out << '\n';
  }
}

std::shared_ptr<CategoricalData> read_categorical_csv(const std::string& path) {
  CsvTable table = read_csv(path);
  const int n = static_cast<int>(table.rows.size());
  const int p = static_cast<int>(table.header.size());
  auto data = std::make_shared<CategoricalData>();
  data->rows = n;
  data->columns = table.header;
  data->codes.assign(p, std::vector<int>(n));
  data->levels.resize(p);
  data->arity.resize(p);
  for (int j = 0; j < p; ++j) {
    std::map<std::string, int> code_of;
    for (int i = 0; i < n; ++i) {
      const std::string& tok = table.rows[i][j];
      auto [it, inserted] = code_of.emplace(tok, static_cast<int>(data->levels[j].size()));
      if (inserted) data->levels[j].push_back(tok);
      data->codes[j][i] = it->second;
    }
    data->arity[j] = static_cast<int>(data->levels[j].size());
  }
  return data;
}

void write_categorical_csv(const CategoricalData& data, const std::string& path) {
  auto out = open_output(path);
  for (int j = 0; j < data.p(); ++j) out << (j ? "," : "") << data.columns[j];
  out << '\n';
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.p(); ++j)
      out << (j ? "," : "") << data.levels[j][data.codes[j][i]];
    out << '\n';
  }
}

std::shared_ptr<CountData> read_count_csv(const std::string& path) {
  CsvTable table = read_csv(path);
  const int n = static_cast<int>(table.rows.size());
  const int p = static_cast<int>(table.header.size());
  auto data = std::make_shared<CountData>();
  data->rows = n;
  data->cols = p;
  data->columns = table.header;
  data->values.resize(static_cast<std::size_t>(n) * p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      double v;
      if (!parse_double(table.rows[i][j], v) || v < 0 || v != std::floor(v))
        throw InputError("count cell must be a non-negative integer, got '" +
                         table.rows[i][j] + "' in " + path);
      data->values[static_cast<std::size_t>(i) * p + j] = static_cast<long long>(v);
    }
  }
  return data;
}

void write_count_csv(const CountData& data, const std::string& path) {
  auto out = open_output(path);
  for (int j = 0; j < data.p(); ++j) out << (j ? "," : "") << data.columns[j];
  out << '\n';
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.p(); ++j) out << (j ? "," : "") << data.at(i, j);
    out << '\n';
  }
}

namespace {

std::shared_ptr<GraphData> read_matrix_market(const std::string& path,
                                              std::optional<bool> force_directed) {
  auto in = open_input(path);
  std::string line;
  std::getline(in, line);
  std::istringstream hdr(line);
  std::string bb, obj, fmt, field, sym;
  hdr >> bb >> obj >> fmt >> field >> sym;
  if (obj != "matrix" || fmt != "coordinate")
    throw InputError("unsupported MatrixMarket header in " + path);
  const bool symmetric_tag = (sym == "symmetric");
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream dims(line);
  long long rows = 0, cols = 0, nnz = 0;
  dims >> rows >> cols >> nnz;
  if (rows != cols) throw InputError("adjacency matrix must be square: " + path);

  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(nnz));
  for (long long t = 0; t < nnz; ++t) {
    if (!std::getline(in, line)) throw InputError("truncated MatrixMarket file: " + path);
    std::istringstream es(line);
    long long i = 0, j = 0;
    double v = 1.0;
    es >> i >> j;
    if (field != "pattern") es >> v;
    if (v != 0.0 && v != 1.0)
      throw InputError("binary sbm expects 0/1 entries, got " + std::to_string(v));
    if (v == 0.0) continue;
    edges.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1));
  }

  bool directed;
  if (force_directed.has_value()) {
    directed = *force_directed;
  } else if (symmetric_tag) {
    directed = false;
  } else {
    // Orientation auto-detection = exact symmetry test.
    std::set<std::pair<int, int>> set(edges.begin(), edges.end());
    directed = false;
    for (auto [a, b] : set) {
      if (a != b && !set.count({b, a})) {
        directed = true;
        break;
      }
    }
  }
  return std::make_shared<GraphData>(static_cast<int>(rows), directed, std::move(edges));
}

std::shared_ptr<GraphData> read_edge_list(const std::string& path,
                                          std::optional<bool> force_directed) {
  auto in = open_input(path);
  std::string line;
  bool directed = force_directed.value_or(false);
  std::vector<std::pair<int, int>> edges;
  int max_node = -1;
  bool first = true;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (first) {
      first = false;
      if (t == "directed") {
        if (!force_directed.value_or(true)) throw InputError("edge list declares directed");
        directed = true;
        continue;
      }
      if (t == "undirected") {
        if (force_directed.value_or(false)) throw InputError("edge list declares undirected");
        directed = false;
        continue;
      }
    }
    std::istringstream es(t);
    long long a = -1, b = -1;
    es >> a >> b;
    if (a < 0 || b < 0) throw InputError("bad edge line '" + t + "' in " + path);
    edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    max_node = std::max(max_node, static_cast<int>(std::max(a, b)));
  }
  if (edges.empty()) throw InputError("edge list has no edges: " + path);
  return std::make_shared<GraphData>(max_node + 1, directed, std::move(edges));
}

}  // namespace

std::shared_ptr<GraphData> read_graph_file(const std::string& path,
                                           std::optional<bool> force_directed) {
  auto in = open_input(path);
  std::string first;
  std::getline(in, first);
  in.close();
  if (first.rfind("%%MatrixMarket", 0) == 0) return read_matrix_market(path, force_directed);
  return read_edge_list(path, force_directed);
}

void write_edge_list(const GraphData& graph, const std::string& path) {
  auto out = open_output(path);
  out << (graph.directed() ? "directed" : "undirected") << '\n';
  for (auto [a, b] : graph.edges()) out << a << ' ' << b << '\n';
}

std::vector<int> read_labels(const std::string& path) {
  auto in = open_input(path);
  std::vector<int> labels;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    labels.push_back(std::stoi(t));
  }
  return labels;
}

void write_labels(const std::vector<int>& labels, const std::string& path) {
  auto out = open_output(path);
  for (int l : labels) out << l << '\n';
}

namespace {

bool looks_like_json(const std::string& path) {
  auto in = open_input(path);
  char c;
  while (in.get(c)) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{';
  }
  return false;
}

// Graph files are MatrixMarket, an orientation header, or whitespace pairs
// of integer node ids; anything else (including single-column tables) is
// treated as CSV.
bool looks_like_graph(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("%%MatrixMarket", 0) == 0) return true;
    if (t == "directed" || t == "undirected") return true;
    if (t.find(',') != std::string::npos) return false;
    std::istringstream tokens(t);
    std::string tok;
    int ints = 0;
    while (tokens >> tok) {
      for (char c : tok)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
      ++ints;
    }
    return ints == 2;
  }
  return false;
}

// Structural facts about a numeric matrix relevant to model detection.
struct NumericShape {
  bool square = false;
  bool binary = false;
  bool zero_diag = false;
  bool symmetric = false;
  bool integral = false;
  bool non_negative = false;
};

NumericShape inspect(const ContinuousData& d) {
  NumericShape s;
  s.square = d.n() == d.p();
  s.binary = ((d.x.array() == 0.0) || (d.x.array() == 1.0)).all();
  s.integral = (d.x.array() == d.x.array().floor()).all();
  s.non_negative = (d.x.array() >= 0.0).all();
  if (s.square) {
    s.zero_diag = d.x.diagonal().isZero(0.0);
    s.symmetric = d.x.isApprox(d.x.transpose(), 0.0);
  }
  return s;
}

std::shared_ptr<GraphData> graph_from_adjacency(const ContinuousData& d, bool directed) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < d.n(); ++i)
    for (int j = 0; j < d.p(); ++j)
      if (d.x(i, j) != 0.0) edges.emplace_back(i, j);
  return std::make_shared<GraphData>(d.n(), directed, std::move(edges));
}

Dataset load_manifest(const std::string& path);

}  // namespace

Dataset load_dataset(const std::string& path, std::optional<ModelKind> kind,
                     std::optional<bool> force_directed) {
  Dataset ds;
  if (looks_like_json(path)) {
    if (kind && *kind != ModelKind::combined)
      throw InputError("JSON manifest input requires the combined model");
    return load_manifest(path);
  }
  if (kind && *kind == ModelKind::combined)
    throw InputError("combined model requires a JSON manifest input");

  const bool csv_like = !looks_like_graph(path);

  // An explicit kind selects its reader directly (CSV files with a single
  // column have no comma in the header, so the sniff only drives the
  // auto-detection path).
  if (kind && *kind == ModelKind::lca) {
    ds.views.push_back(DatasetView{"data", ModelKind::lca, read_categorical_csv(path)});
    return ds;
  }
  if (kind && *kind == ModelKind::mom) {
    ds.views.push_back(DatasetView{"data", ModelKind::mom, read_count_csv(path)});
    return ds;
  }
  if (kind && (*kind == ModelKind::gmm || *kind == ModelKind::diag_gmm)) {
    auto cont = read_continuous_csv(path);
    const NumericShape shape = inspect(*cont);
    if (shape.square && shape.binary && shape.zero_diag && shape.symmetric)
      throw InputError(
          "input detects as a graph adjacency matrix, conflicting with the requested "
          "continuous model; pass --model sbm or reshape the data");
    ds.views.push_back(DatasetView{"data", *kind, std::move(cont)});
    return ds;
  }

  if (!csv_like) {
    // Edge list or MatrixMarket.
    if (kind && *kind != ModelKind::sbm)
      throw InputError("graph input is only compatible with the sbm model");
    ds.views.push_back(DatasetView{"data", ModelKind::sbm,
                                   read_graph_file(path, force_directed)});
    return ds;
  }

  // Try numeric first.
  std::shared_ptr<ContinuousData> cont;
  try {
    cont = read_continuous_csv(path);
  } catch (const InputError&) {
    cont = nullptr;
  }
  if (!cont) {
    // Non-numeric cells: all-categorical table.
    auto cat = read_categorical_csv(path);
    bool any_numeric_col = false;
    for (int j = 0; j < cat->p(); ++j) {
      bool numeric = true;
      for (const auto& lv : cat->levels[j]) {
        double v;
        if (!parse_double(lv, v)) {
          numeric = false;
          break;
        }
      }
      any_numeric_col = any_numeric_col || numeric;
    }
    if (kind && *kind != ModelKind::lca)
      throw InputError("non-numeric CSV is only compatible with the lca model");
    if (any_numeric_col)
      throw InputError(
          "CSV mixes numeric and categorical columns; split it into views and use a "
          "combined manifest");
    ds.views.push_back(DatasetView{"data", ModelKind::lca, std::move(cat)});
    return ds;
  }

  const NumericShape shape = inspect(*cont);
  const bool adjacency_like = shape.square && shape.binary && shape.zero_diag;
  if (kind) {
    switch (*kind) {
      case ModelKind::sbm: {
        if (!adjacency_like)
          throw InputError("sbm expects a square 0/1 matrix with a zero diagonal");
        bool directed = force_directed.value_or(!shape.symmetric);
        ds.views.push_back(DatasetView{"data", ModelKind::sbm,
                                       graph_from_adjacency(*cont, directed)});
        return ds;
      }
      case ModelKind::gmm:
      case ModelKind::diag_gmm:
        ds.views.push_back(DatasetView{"data", *kind, std::move(cont)});
        return ds;
      default:
        throw InputError("model incompatible with numeric CSV input");
    }
  }
  if (adjacency_like && shape.symmetric) {
    ds.views.push_back(DatasetView{"data", ModelKind::sbm,
                                   graph_from_adjacency(*cont, force_directed.value_or(false))});
    return ds;
  }
  ds.views.push_back(DatasetView{"data", ModelKind::gmm, std::move(cont)});
  return ds;
}

namespace {

Dataset load_manifest(const std::string& path) {
  auto in = open_input(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad manifest JSON: ") + e.what());
  }
  if (!j.contains("views") || !j["views"].is_object())
    throw InputError("manifest must contain a 'views' object");
  const auto base = std::filesystem::path(path).parent_path();
  Dataset ds;
  for (auto& [name, entry] : j["views"].items()) {
    if (!entry.contains("model") || !entry.contains("path"))
      throw InputError("manifest view '" + name + "' needs 'model' and 'path'");
    ModelKind kind = model_kind_from_string(entry["model"].get<std::string>());
    if (kind == ModelKind::combined)
      throw InputError("manifest views cannot be combined models");
    std::string vpath = entry["path"].get<std::string>();
    std::filesystem::path resolved = std::filesystem::path(vpath).is_absolute()
                                         ? std::filesystem::path(vpath)
                                         : base / vpath;
    std::optional<bool> directed;
    if (entry.contains("orientation"))
      directed = entry["orientation"].get<std::string>() == "directed";
    Dataset sub = load_dataset(resolved.string(), kind, directed);
    DatasetView view = std::move(sub.views.front());
    view.name = name;
    ds.views.push_back(std::move(view));
  }
  if (ds.views.empty()) throw InputError("manifest has no views");
  for (const auto& v : ds.views)
    if (v.n() != ds.views.front().n())
      throw InputError("manifest views disagree on the number of objects");
  return ds;
}

}  // namespace

nlohmann::json fit_result_to_json(const FitResult& fit) {
  nlohmann::json j;
  j["version"] = fit.version;
  j["model"] = fit.model;
  j["algorithm"] = fit.algorithm;
  j["alpha"] = fit.alpha;
  j["seed"] = fit.seed;
  j["n"] = fit.n;
  j["K"] = fit.k;
  j["labels"] = fit.labels;
  j["icl"] = {{"obs", fit.icl.obs_term},
              {"partition", fit.icl.partition_term},
              {"total", fit.icl.total}};
  j["prior"] = fit.prior;
  j["map_estimates"] = fit.map_estimates;
  j["hierarchy"] = fit.hierarchy;
  j["history"] = fit.history;
  j["data_info"] = fit.data_info;
  j["config"] = fit.config;
  return j;
}

FitResult fit_result_from_json(const nlohmann::json& j) {
  FitResult fit;
  fit.version = j.at("version").get<std::string>();
  fit.model = j.at("model").get<std::string>();
  fit.algorithm = j.at("algorithm").get<std::string>();
  fit.alpha = j.at("alpha").get<double>();
  fit.seed = j.at("seed").get<std::uint64_t>();
  fit.n = j.at("n").get<int>();
  fit.k = j.at("K").get<int>();
  fit.labels = j.at("labels").get<std::vector<int>>();
  fit.icl.obs_term = j.at("icl").at("obs").get<double>();
  fit.icl.partition_term = j.at("icl").at("partition").get<double>();
  fit.icl.total = j.at("icl").at("total").get<double>();
  fit.prior = j.at("prior");
  fit.map_estimates = j.at("map_estimates");
  fit.hierarchy = j.at("hierarchy");
  fit.history = j.at("history").get<std::vector<double>>();
  fit.data_info = j.at("data_info");
  fit.config = j.at("config");
  return fit;
}

void save_fit_result(const FitResult& fit, const std::string& path) {
  auto out = open_output(path);
  out << fit_result_to_json(fit).dump(2) << '\n';
}

FitResult load_fit_result(const std::string& path) {
  auto in = open_input(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad fit result JSON: ") + e.what());
  }
  try {
    return fit_result_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad fit result structure: ") + e.what());
  }
}

SimSpec parse_sim_spec(const nlohmann::json& j) {
  SimSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  spec.kind = model_kind_from_string(kind);
  if (spec.kind == ModelKind::sbm) {
    spec.sbm.n = j.at("n").get<int>();
    spec.sbm.pi = j.at("pi").get<std::vector<double>>();
    auto rows = j.at("theta").get<std::vector<std::vector<double>>>();
    const int k = static_cast<int>(rows.size());
    spec.sbm.theta.resize(k, k);
    for (int a = 0; a < k; ++a) {
      if (static_cast<int>(rows[a].size()) != k)
        throw InputError("sim spec: theta must be square");
      for (int b = 0; b < k; ++b) spec.sbm.theta(a, b) = rows[a][b];
    }
    spec.sbm.directed = j.value("orientation", "undirected") == "directed";
  } else if (spec.kind == ModelKind::gmm) {
    spec.gmm.n = j.at("n").get<int>();
    spec.gmm.pi = j.at("pi").get<std::vector<double>>();
    for (const auto& m : j.at("means")) {
      auto v = m.get<std::vector<double>>();
      spec.gmm.means.push_back(Eigen::Map<Eigen::VectorXd>(v.data(), v.size()));
    }
    for (const auto& c : j.at("covs")) {
      auto rows = c.get<std::vector<std::vector<double>>>();
      Eigen::MatrixXd cov(rows.size(), rows.size());
      for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < rows.size(); ++b) cov(a, b) = rows[a][b];
      spec.gmm.covs.push_back(cov);
    }
  } else if (spec.kind == ModelKind::lca) {
    spec.lca.n = j.at("n").get<int>();
    spec.lca.pi = j.at("pi").get<std::vector<double>>();
    spec.lca.probs = j.at("probs").get<std::vector<std::vector<std::vector<double>>>>();
  } else {
    throw InputError("sim spec: kind must be sbm, gmm or lca");
  }
  return spec;
}

SimSpec load_sim_spec(const std::string& path) {
  auto in = open_input(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad sim spec JSON: ") + e.what());
  }
  try {
    return parse_sim_spec(j);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad sim spec structure: ") + e.what());
  }
}

}  // namespace iclust
