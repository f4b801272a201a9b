#include "ipp/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ipp {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string pattern_to_csv(const PointPattern& p) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << (p.dim() == 3 ? "x,y,z" : (p.dim() == 2 ? "x,y" : "x")) << '\n';
  for (const auto& pt : p.points) {
    os << pt[0];
    for (int c = 1; c < p.dim(); ++c) os << ',' << pt[c];
    os << '\n';
  }
  return os.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

PointPattern pattern_from_csv(const std::string& text, const Window& window) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty pattern CSV");
  const auto header = split_csv_line(strip(line));
  const int cols = static_cast<int>(header.size());
  if (cols != window.dim)
    throw std::runtime_error("pattern CSV column count does not match the window dimension");
  PointPattern p(window);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const auto s = strip(line);
    if (s.empty()) continue;
    const auto fields = split_csv_line(s);
    if (static_cast<int>(fields.size()) != cols)
      throw std::runtime_error("pattern CSV: bad field count on line " + std::to_string(row));
    Point pt{0.0, 0.0, 0.0};
    for (int c = 0; c < cols; ++c) pt[static_cast<std::size_t>(c)] = std::stod(fields[c]);
    p.points.push_back(pt);
  }
  return p;
}

void write_pattern_csv(const std::string& path, const PointPattern& p) {
  write_text_file(path, pattern_to_csv(p));
}

PointPattern read_pattern_csv(const std::string& path, const Window& window) {
  return pattern_from_csv(read_text_file(path), window);
}

std::string grid_to_csv(const GridField& g) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << g.resolution[0];
  for (int c = 1; c < g.window.dim; ++c) os << ',' << g.resolution[c];
  os << '\n';
  for (double v : g.values) os << v << '\n';
  return os.str();
}

GridField grid_from_csv(const std::string& text, const Window& window) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty grid CSV");
  const auto header = split_csv_line(strip(line));
  if (static_cast<int>(header.size()) != window.dim)
    throw std::runtime_error("grid CSV header does not match the window dimension");
  std::array<int, 3> res{1, 1, 1};
  for (int c = 0; c < window.dim; ++c) res[static_cast<std::size_t>(c)] = std::stoi(header[c]);
  GridField g(window, res);
  g.values.clear();
  while (std::getline(in, line)) {
    const auto s = strip(line);
    if (!s.empty()) g.values.push_back(std::stod(s));
  }
  if (g.values.size() != g.node_count())
    throw std::runtime_error("grid CSV value count does not match the resolution");
  return g;
}

void write_grid_csv(const std::string& path, const GridField& g) {
  write_text_file(path, grid_to_csv(g));
}

GridField read_grid_csv(const std::string& path, const Window& window) {
  return grid_from_csv(read_text_file(path), window);
}

void write_grid_pgm(const std::string& path, const GridField& g) {
  if (g.window.dim != 2) throw std::invalid_argument("write_grid_pgm: 2-d rasters only");
  const int nx = g.resolution[0], ny = g.resolution[1];
  const auto [mn_it, mx_it] = std::minmax_element(g.values.begin(), g.values.end());
  const double mn = *mn_it, mx = *mx_it;
  const double span = mx > mn ? mx - mn : 1.0;
  std::ostringstream os;
  os << "P2\n" << nx << ' ' << ny << "\n255\n";
  // PGM rows run top to bottom; flip so the image matches plot orientation
  for (int j = ny - 1; j >= 0; --j) {
    for (int i = 0; i < nx; ++i) {
      const double v = g.values[static_cast<std::size_t>(j) * nx + i];
      os << static_cast<int>(std::lround(255.0 * (v - mn) / span)) << (i + 1 < nx ? " " : "\n");
    }
  }
  write_text_file(path, os.str());
}

namespace {

json window_to_json(const Window& w) {
  json j;
  j["lower"] = std::vector<double>(w.lower.begin(), w.lower.begin() + w.dim);
  j["upper"] = std::vector<double>(w.upper.begin(), w.upper.begin() + w.dim);
  return j;
}

Window window_from_json(const json& j, int dim) {
  const auto lo = j.at("lower").get<std::vector<double>>();
  const auto hi = j.at("upper").get<std::vector<double>>();
  if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
    throw std::runtime_error("window bounds do not match the dimension");
  std::array<double, 3> l{0, 0, 0}, u{0, 0, 0};
  for (int c = 0; c < dim; ++c) {
    l[static_cast<std::size_t>(c)] = lo[static_cast<std::size_t>(c)];
    u[static_cast<std::size_t>(c)] = hi[static_cast<std::size_t>(c)];
  }
  return Window(dim, l, u);
}

json correlation_to_json(const CorrelationModel& c) {
  json j;
  j["family"] = family_name(c.family);
  j["scale"] = c.scale;
  if (c.family == CorrelationFamily::WhittleMatern) j["shape"] = c.shape;
  return j;
}

CorrelationModel correlation_from_json(const json& j) {
  return CorrelationModel(family_from_name(j.at("family").get<std::string>()),
                          j.at("scale").get<double>(), j.value("shape", 0.5));
}

json base_to_json(const BaseProcessModel& b) {
  json j;
  switch (b.kind) {
    case BaseProcessKind::Poisson:
      j["type"] = "poisson";
      j["rho"] = b.rho;
      break;
    case BaseProcessKind::Dpp:
      j["type"] = "dpp";
      j["rho"] = b.kernel.variance;
      j["correlation"] = correlation_to_json(b.kernel.correlation);
      break;
    case BaseProcessKind::MaternI:
    case BaseProcessKind::MaternII:
      j["type"] = b.kind == BaseProcessKind::MaternI ? "matern1" : "matern2";
      j["rho_phi"] = b.rho_phi;
      j["D"] = b.hardcore;
      break;
  }
  return j;
}

BaseProcessModel base_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "poisson") return BaseProcessModel::poisson(j.at("rho").get<double>());
  if (type == "dpp")
    return BaseProcessModel::dpp(
        DppKernel(j.at("rho").get<double>(), correlation_from_json(j.at("correlation"))));
  if (type == "matern1")
    return BaseProcessModel::matern1(j.at("rho_phi").get<double>(), j.at("D").get<double>());
  if (type == "matern2")
    return BaseProcessModel::matern2(j.at("rho_phi").get<double>(), j.at("D").get<double>());
  throw std::runtime_error("unknown base process type: " + type);
}

json radius_to_json(const RadiusLaw& r) {
  json j;
  if (r.kind == RadiusKind::Deterministic) {
    j["type"] = "deterministic";
    j["value"] = r.delta0;
  } else {
    j["type"] = "beta";
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
  }
  return j;
}

RadiusLaw radius_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "deterministic") return RadiusLaw::deterministic(j.at("value").get<double>());
  if (type == "beta")
    return RadiusLaw::beta_law(j.at("alpha").get<double>(), j.at("beta").get<double>());
  throw std::runtime_error("unknown radius law: " + type);
}

json selection_to_json(const SelectionModel& s) {
  json j;
  if (s.kind == SelectionKind::Chi2) {
    j["type"] = "chi2";
    j["k"] = s.k;
    j["kappa"] = s.kappa;
    j["correlation"] = correlation_to_json(s.correlation);
  } else {
    j["type"] = "boolean";
    j["germ_intensity"] = s.germ_intensity;
    j["radius"] = radius_to_json(s.radius);
    j["complement"] = s.complement;
  }
  return j;
}

SelectionModel selection_from_json(const json& j, int dim) {
  const auto type = j.at("type").get<std::string>();
  if (type == "chi2") {
    const int k = j.value("k", 1);
    const auto corr = correlation_from_json(j.at("correlation"));
    if (j.contains("kappa")) return SelectionModel::chi2(k, j.at("kappa").get<double>(), corr);
    return SelectionModel::chi2_from_q(k, j.at("q").get<double>(), corr);
  }
  if (type == "boolean") {
    const auto radius = radius_from_json(j.at("radius"));
    const bool complement = j.value("complement", false);
    if (j.contains("germ_intensity"))
      return SelectionModel::boolean(j.at("germ_intensity").get<double>(), radius, complement,
                                     dim);
    return SelectionModel::boolean_from_q(j.at("q").get<double>(), radius, complement, dim);
  }
  throw std::runtime_error("unknown selection type: " + type);
}

}  // namespace

std::string model_to_json(const ModelConfig& cfg) {
  json j;
  j["dim"] = cfg.window.dim;
  j["window"] = window_to_json(cfg.window);
  j["base"] = base_to_json(cfg.model.base);
  j["selection"] = selection_to_json(cfg.model.selection);
  j["seed"] = cfg.seed;
  return j.dump(2) + "\n";
}

ModelConfig model_from_json(const std::string& text) {
  const json j = json::parse(text);
  ModelConfig cfg;
  const int dim = j.at("dim").get<int>();
  cfg.window = j.contains("window") ? window_from_json(j.at("window"), dim)
                                    : Window::unit_square();
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.model = InterruptedModel(base_from_json(j.at("base")),
                               selection_from_json(j.at("selection"), dim), dim);
  return cfg;
}

ModelConfig read_model_json(const std::string& path) {
  return model_from_json(read_text_file(path));
}

void write_model_json(const std::string& path, const ModelConfig& cfg) {
  write_text_file(path, model_to_json(cfg));
}

}  // namespace ipp
