#include "pqnehari/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "pqnehari/errors.hpp"

namespace pqnehari {

namespace {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_real(const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw ConfigError("key " + key + ": expected a real number, got '" + text + "'");
  }
  return x;
}

long long parse_integer(const std::string& key, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw ConfigError("key " + key + ": expected an integer, got '" + text + "'");
  }
  return x;
}

int parse_int(const std::string& key, const std::string& text) {
  const long long x = parse_integer(key, text);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ConfigError("key " + key + ": integer out of range");
  }
  return static_cast<int>(x);
}

std::string format_table(const std::vector<std::pair<double, double>>& table) {
  std::string out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_real(table[i].first) + " " + format_real(table[i].second);
  }
  return out;
}

// "t0 y0, t1 y1, ..."; empty text gives an empty table.
std::vector<std::pair<double, double>> parse_table(const std::string& key, const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::istringstream pair(item);
    std::string t, y, extra;
    if (!(pair >> t >> y) || (pair >> extra)) {
      throw ConfigError("key " + key + ": expected 't y' pairs separated by commas");
    }
    out.emplace_back(parse_real(key, t), parse_real(key, y));
  }
  return out;
}

struct Field {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string& key, const std::string&)> set;
};

template <class Access>
Field real_field(std::string key, Access access) {
  return {std::move(key),
          [access](const RunConfig& c) { return format_real(access(c)); },
          [access](RunConfig& c, const std::string& k, const std::string& v) {
            access(c) = parse_real(k, v);
          }};
}

template <class Access>
Field int_field(std::string key, Access access) {
  return {std::move(key),
          [access](const RunConfig& c) { return std::to_string(access(c)); },
          [access](RunConfig& c, const std::string& k, const std::string& v) {
            access(c) = parse_int(k, v);
          }};
}

template <class Pick>
void add_potential(std::vector<Field>& fields, const std::string& section, Pick pick) {
  fields.push_back({section + ".family",
                    [pick](const RunConfig& c) {
                      return to_string(pick(c).family);
                    },
                    [pick](RunConfig& c, const std::string&, const std::string& v) {
                      pick(c).family = potential_family_from_string(v);
                    }});
  fields.push_back(real_field(section + ".base_level", [pick](auto& c) -> auto& {
    return pick(c).base_level;
  }));
  fields.push_back(real_field(section + ".modulation_amplitude", [pick](auto& c) -> auto& {
    return pick(c).modulation_amplitude;
  }));
  fields.push_back(real_field(section + ".decay_amplitude", [pick](auto& c) -> auto& {
    return pick(c).decay.amplitude;
  }));
  fields.push_back(real_field(section + ".decay_rate", [pick](auto& c) -> auto& {
    return pick(c).decay.rate;
  }));
  fields.push_back({section + ".decay_shape",
                    [pick](const RunConfig& c) {
                      return to_string(pick(c).decay.shape);
                    },
                    [pick](RunConfig& c, const std::string&, const std::string& v) {
                      pick(c).decay.shape = decay_shape_from_string(v);
                    }});
  fields.push_back(real_field(section + ".ball_floor", [pick](auto& c) -> auto& {
    return pick(c).ball_floor;
  }));
  fields.push_back(real_field(section + ".ball_radius", [pick](auto& c) -> auto& {
    return pick(c).ball_radius;
  }));
}

template <class Pick>
void add_nonlinearity(std::vector<Field>& fields, const std::string& section, Pick pick) {
  fields.push_back({section + ".kind",
                    [pick](const RunConfig& c) {
                      return to_string(pick(c).kind);
                    },
                    [pick](RunConfig& c, const std::string& k, const std::string& v) {
                      try {
                        pick(c).kind = nonlinearity_kind_from_string(v);
                      } catch (const Error& e) {
                        throw ConfigError("key " + k + ": " + e.what());
                      }
                    }});
  fields.push_back(real_field(section + ".gamma", [pick](auto& c) -> auto& {
    return pick(c).gamma;
  }));
  fields.push_back(real_field(section + ".power", [pick](auto& c) -> auto& {
    return pick(c).power;
  }));
  fields.push_back({section + ".table",
                    [pick](const RunConfig& c) {
                      return format_table(pick(c).table);
                    },
                    [pick](RunConfig& c, const std::string& k, const std::string& v) {
                      pick(c).table = parse_table(k, v);
                    }});
}

void add_perturbation(std::vector<Field>& fields, const std::string& prefix, std::size_t index) {
  fields.push_back(real_field("asymptotic." + prefix + "_amplitude", [index](auto& c) -> auto& {
    return c.asymptotic[index].amplitude;
  }));
  fields.push_back(real_field("asymptotic." + prefix + "_rate", [index](auto& c) -> auto& {
    return c.asymptotic[index].rate;
  }));
  fields.push_back({"asymptotic." + prefix + "_shape",
                    [index](const RunConfig& c) { return to_string(c.asymptotic[index].shape); },
                    [index](RunConfig& c, const std::string&, const std::string& v) {
                      c.asymptotic[index].shape = decay_shape_from_string(v);
                    }});
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(real_field("problem.p", [](auto& c) -> auto& { return c.problem.exponents.p; }));
    f.push_back(real_field("problem.q", [](auto& c) -> auto& { return c.problem.exponents.q; }));
    f.push_back(real_field("problem.alpha", [](auto& c) -> auto& { return c.problem.exponents.alpha; }));
    f.push_back(real_field("problem.beta", [](auto& c) -> auto& { return c.problem.exponents.beta; }));
    f.push_back(real_field("problem.dimension_proxy",
                           [](auto& c) -> auto& { return c.problem.dimension_proxy; }));
    f.push_back(int_field("grid.dimension", [](auto& c) -> auto& { return c.problem.grid.dimension; }));
    f.push_back(real_field("grid.half_width", [](auto& c) -> auto& { return c.problem.grid.half_width; }));
    f.push_back(int_field("grid.nodes_per_axis",
                          [](auto& c) -> auto& { return c.problem.grid.nodes_per_axis; }));
    add_potential(f, "potential_a", [](auto& c) -> auto& { return c.problem.a; });
    add_potential(f, "potential_b", [](auto& c) -> auto& { return c.problem.b; });
    add_potential(f, "potential_lambda", [](auto& c) -> auto& { return c.problem.lambda; });
    add_nonlinearity(f, "nonlinearity_f", [](auto& c) -> auto& { return c.problem.f; });
    add_nonlinearity(f, "nonlinearity_g", [](auto& c) -> auto& { return c.problem.g; });
    f.push_back(real_field("solver.tol", [](auto& c) -> auto& { return c.solver.tol; }));
    f.push_back(int_field("solver.max_iters", [](auto& c) -> auto& { return c.solver.max_iters; }));
    f.push_back(int_field("solver.multistart", [](auto& c) -> auto& { return c.solver.multistart; }));
    f.push_back({"solver.seed", [](const RunConfig& c) { return std::to_string(c.solver.seed); },
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   const long long s = parse_integer(k, v);
                   if (s < 0) throw ConfigError("key " + k + ": seed must be nonnegative");
                   c.solver.seed = static_cast<std::uint64_t>(s);
                 }});
    f.push_back({"solver.metric", [](const RunConfig& c) { return to_string(c.solver.metric); },
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   try {
                     c.solver.metric = descent_metric_from_string(v);
                   } catch (const Error& e) {
                     throw ConfigError("key " + k + ": " + e.what());
                   }
                 }});
    f.push_back(int_field("solver.memory", [](auto& c) -> auto& { return c.solver.memory; }));
    f.push_back(real_field("solver.armijo", [](auto& c) -> auto& { return c.solver.armijo; }));
    f.push_back(int_field("solver.max_halvings", [](auto& c) -> auto& { return c.solver.max_halvings; }));
    add_perturbation(f, "a", 0);
    add_perturbation(f, "b", 1);
    add_perturbation(f, "lambda", 2);
    f.push_back(real_field("sweep.ball_radius", [](auto& c) -> auto& { return c.sweep.ball_radius; }));
    f.push_back(int_field("sweep.threshold_steps", [](auto& c) -> auto& { return c.sweep.threshold_steps; }));
    f.push_back(real_field("sweep.lambda_max", [](auto& c) -> auto& { return c.sweep.lambda_max; }));
    f.push_back(int_field("verify.samples", [](auto& c) -> auto& { return c.verify_samples; }));
    return f;
  }();
  return table;
}

const Field& field(const std::string& key) {
  for (const auto& f : fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown config key '" + key + "'");
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(f.key);
  return out;
}

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
  try {
    field(key).set(config, key, trim(value));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("key " + key + ": " + e.what());
  }
}

std::string get_config_value(const RunConfig& config, const std::string& key) {
  return field(key).get(config);
}

RunConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  RunConfig config;
  for (const auto& [section, entries] : tree) {
    if (entries.empty()) {
      throw ConfigError("config key '" + section + "' is outside any section");
    }
    for (const auto& [key, node] : entries) {
      set_config_value(config, section + "." + key, node.get_value<std::string>());
    }
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
  }
  set_config_value(config, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

std::string format_config(const RunConfig& config) {
  std::ostringstream out;
  std::string current;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string section = f.key.substr(0, dot);
    if (section != current) {
      if (!current.empty()) out << '\n';
      out << '[' << section << "]\n";
      current = section;
    }
    out << f.key.substr(dot + 1) << " = " << f.get(config) << '\n';
  }
  return out.str();
}

}  // namespace pqnehari
