#include <fstream>
#include <istream>
#include <sstream>

#include "pcoreset/bench.hpp"

namespace pcoreset {

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = strip(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_value(const std::string& text, std::size_t line, const std::string& key) {
  std::istringstream in(text);
  T v{};
  if (!(in >> v) || !(in >> std::ws).eof()) {
    throw ParseError("config", line, "bad value '" + text + "' for " + key);
  }
  return v;
}

bool parse_bool(const std::string& text, std::size_t line, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ParseError("config", line, "bad boolean '" + text + "' for " + key);
}

DatasetSpec parse_dataset(const std::string& name, const std::string& value, std::size_t line,
                          const std::filesystem::path& base) {
  std::istringstream in(value);
  std::string kind;
  in >> kind;
  DatasetSpec spec;
  spec.name = name;
  std::string token;
  if (kind == "synth") {
    SynthParams p;
    while (in >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) throw ParseError("config", line, "expected key=value, got '" + token + "'");
      const std::string k = token.substr(0, eq), v = token.substr(eq + 1);
      if (k == "kind") p.kind = parse_synth_kind(v);
      else if (k == "n") p.n = parse_value<Index>(v, line, k);
      else if (k == "d") p.d = parse_value<Index>(v, line, k);
      else if (k == "k") p.k = parse_value<Index>(v, line, k);
      else if (k == "j") p.j = parse_value<Index>(v, line, k);
      else if (k == "noise") p.noise = parse_value<double>(v, line, k);
      else if (k == "unit") p.unit_rows = parse_bool(v, line, k);
      else if (k == "seed") p.seed = parse_value<std::uint64_t>(v, line, k);
      else throw ParseError("config", line, "unknown synth parameter '" + k + "'");
    }
    spec.synth = p;
  } else if (kind == "file") {
    while (in >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) throw ParseError("config", line, "expected key=value, got '" + token + "'");
      const std::string k = token.substr(0, eq), v = token.substr(eq + 1);
      if (k == "path") {
        const std::filesystem::path path(v);
        spec.path = (path.is_relative() && !base.empty() ? base / path : path).string();
      } else if (k == "format") {
        spec.format = v;
      } else if (k == "header") {
        spec.header = parse_bool(v, line, k);
      } else {
        throw ParseError("config", line, "unknown file parameter '" + k + "'");
      }
    }
    if (spec.path.empty()) throw ParseError("config", line, "file dataset needs path=");
  } else {
    throw ParseError("config", line, "dataset kind must be 'synth' or 'file'");
  }
  return spec;
}

}  // namespace

BenchConfig parse_bench_config(std::istream& in, const std::filesystem::path& base) {
  BenchConfig cfg;
  cfg.datasets.clear();
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = strip(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("config", line, "expected key = value");
    const std::string key = strip(body.substr(0, eq));
    const std::string value = strip(body.substr(eq + 1));
    if (key.rfind("dataset.", 0) == 0) {
      cfg.datasets.push_back(parse_dataset(key.substr(8), value, line, base));
    } else if (key == "algorithms") {
      cfg.algorithms.clear();
      for (const auto& a : split_list(value)) cfg.algorithms.push_back(parse_algorithm(a));
    } else if (key == "k") {
      cfg.ks.clear();
      for (const auto& v : split_list(value)) cfg.ks.push_back(parse_value<Index>(v, line, key));
    } else if (key == "sizes") {
      cfg.sizes.clear();
      for (const auto& v : split_list(value)) cfg.sizes.push_back(parse_value<Index>(v, line, key));
    } else if (key == "seeds") {
      cfg.seeds = parse_value<Index>(value, line, key);
    } else if (key == "seed") {
      cfg.master_seed = parse_value<std::uint64_t>(value, line, key);
    } else if (key == "repetitions") {
      cfg.repetitions = parse_value<Index>(value, line, key);
    } else if (key == "threads") {
      cfg.threads = parse_value<int>(value, line, key);
    } else if (key == "error_form") {
      cfg.error_form = parse_error_form(value);
    } else if (key == "out") {
      cfg.out = value;
    } else {
      throw ParseError("config", line, "unknown key '" + key + "'");
    }
  }
  return cfg;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return parse_bench_config(in, path.parent_path());
  } catch (const ParseError& e) {
    std::string msg = e.what();
    throw ParseError(path.string(), e.line(), msg.substr(msg.find(": ") + 2));
  }
}

}  // namespace pcoreset
