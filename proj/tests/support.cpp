#include "support.hpp"

#include <cstdio>
#include <iostream>
#include <unistd.h>
#include <random>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "balancer/cli.hpp"

namespace testing {

std::string data_path(const std::string &name) { return std::string(BALANCER_DATA_DIR) + "/" + name; }

TempDir::TempDir(const std::string &tag) {
  static std::uint64_t counter = 0;
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("balancer-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::vector<std::string> node_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s = "n";
    const std::string digits = std::to_string(i);
    s += std::string(4 - std::min<std::size_t>(4, digits.size()), '0') + digits;
    names.push_back(s);
  }
  return names;
}

balancer::SignedGraph random_graph(std::size_t n, std::uint64_t seed) {
  balancer::SignedGraph g(node_names(n));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (balancer::PairIndex p = 0; p < g.edge_count(); ++p) {
    double w = 0.0;
    while (w == 0.0) w = dist(rng);
    g.set_weight_at(p, w);
  }
  return g;
}

std::vector<balancer::FactorRecord> random_records(std::size_t n, std::uint64_t seed) {
  const auto names = node_names(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> trade(0.0, 1e9);
  std::uniform_int_distribution<int> rel(0, 4), bit(0, 1), border(-1, 2);
  std::lognormal_distribution<double> fx(0.0, 1.0);
  std::vector<balancer::FactorRecord> out;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      balancer::FactorRecord r;
      r.source = names[a];
      r.target = names[b];
      r.exports = trade(rng);
      r.imports = trade(rng);
      r.religious_conflicts = rel(rng);
      r.diplomatic = bit(rng);
      r.war = bit(rng);
      r.border = border(rng);
      r.icj_case = bit(rng);
      r.peace_treaty = bit(rng);
      r.exchange_rate_ratio = fx(rng);
      out.push_back(r);
    }
  }
  return out;
}

namespace {

class DotLexer {
public:
  explicit DotLexer(const std::string &text) : s_(text) {}

  // Returns the next token: an ID (unquoted), a quoted ID's contents prefixed
  // with '"', a punctuation token, "--", or "" at end of input.
  std::string next() {
    skip_space();
    if (pos_ >= s_.size()) return {};
    const char c = s_[pos_];
    if (c == '"') {
      std::string out = "\"";
      ++pos_;
      while (true) {
        if (pos_ >= s_.size()) throw std::runtime_error("unterminated string");
        char d = s_[pos_++];
        if (d == '"') break;
        if (d == '\\' && pos_ < s_.size()) {
          const char e = s_[pos_++];
          if (e != '"' && e != '\\') out.push_back('\\');
          d = e;
        }
        out.push_back(d);
      }
      return out;
    }
    if (c == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '-') {
      pos_ += 2;
      return "--";
    }
    if (std::string("{}[];=,").find(c) != std::string::npos) {
      ++pos_;
      return std::string(1, c);
    }
    const std::size_t start = pos_;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      return s_.substr(start, pos_ - start);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-') {
      ++pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      return s_.substr(start, pos_ - start);
    }
    throw std::runtime_error(std::string("unexpected character '") + c + "'");
  }

private:
  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  const std::string &s_;
  std::size_t pos_ = 0;
};

bool is_id(const std::string &tok) {
  if (tok.empty()) return false;
  if (tok == "--" || (tok.size() == 1 && std::string("{}[];=,").find(tok[0]) != std::string::npos)) return false;
  return true;
}

std::string id_value(const std::string &tok) { return tok[0] == '"' ? tok.substr(1) : tok; }

}  // namespace

DotGraph parse_dot(const std::string &text) {
  DotLexer lex(text);
  auto expect = [&](const std::string &want) {
    const auto t = lex.next();
    if (t != want) throw std::runtime_error("expected '" + want + "', got '" + t + "'");
  };
  DotGraph g;
  std::string tok = lex.next();
  if (tok == "strict") tok = lex.next();
  if (tok != "graph") throw std::runtime_error("expected undirected 'graph', got '" + tok + "'");
  tok = lex.next();
  if (is_id(tok) && tok != "{") {
    g.id = id_value(tok);
    tok = lex.next();
  }
  if (tok != "{") throw std::runtime_error("expected '{'");

  auto attr_list = [&](std::string &t) {
    std::map<std::string, std::string> attrs;
    while (t == "[") {
      t = lex.next();
      while (t != "]") {
        if (!is_id(t)) throw std::runtime_error("expected attribute name, got '" + t + "'");
        const std::string key = id_value(t);
        expect("=");
        const std::string value = lex.next();
        if (!is_id(value)) throw std::runtime_error("expected attribute value for '" + key + "'");
        attrs[key] = id_value(value);
        t = lex.next();
        if (t == "," || t == ";") t = lex.next();
      }
      t = lex.next();
    }
    return attrs;
  };

  tok = lex.next();
  while (tok != "}") {
    if (tok.empty()) throw std::runtime_error("unexpected end of input");
    if (!is_id(tok)) throw std::runtime_error("expected statement, got '" + tok + "'");
    const bool keyword = tok == "graph" || tok == "node" || tok == "edge";
    const std::string first = id_value(tok);
    tok = lex.next();
    if (keyword) {
      if (tok != "[") throw std::runtime_error("attribute statement needs '['");
      attr_list(tok);
    } else if (tok == "--") {
      const std::string second = lex.next();
      if (!is_id(second)) throw std::runtime_error("edge needs a second endpoint");
      tok = lex.next();
      if (tok == "--") throw std::runtime_error("edge chains are not emitted");
      g.edges.push_back({first, id_value(second), attr_list(tok)});
    } else {
      auto attrs = attr_list(tok);
      if (!g.nodes.emplace(first, std::move(attrs)).second) throw std::runtime_error("duplicate node " + first);
    }
    if (tok == ";") tok = lex.next();
  }
  if (!lex.next().empty()) throw std::runtime_error("trailing content after graph");
  return g;
}

CliResult run(const std::vector<std::string> &args) {
  std::vector<const char *> argv{"balancer"};
  for (const auto &a : args) argv.push_back(a.c_str());

  // Log output goes to the C stderr stream, so capture file descriptor 2 as well.
  std::FILE *capture = std::tmpfile();
  std::fflush(stderr);
  const int saved_fd = ::dup(2);
  ::dup2(::fileno(capture), 2);

  std::ostringstream out, err;
  auto *old_out = std::cout.rdbuf(out.rdbuf());
  auto *old_err = std::cerr.rdbuf(err.rdbuf());
  CliResult r;
  r.code = balancer::run_cli(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);

  std::fflush(stderr);
  ::dup2(saved_fd, 2);
  ::close(saved_fd);
  std::rewind(capture);
  std::string logged;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, capture)) > 0) logged.append(buf, got);
  std::fclose(capture);

  r.out = out.str();
  r.err = err.str() + logged;
  return r;
}

}  // namespace testing
