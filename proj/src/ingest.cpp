#include "balancer/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "balancer/csv.hpp"
#include "balancer/errors.hpp"
#include "balancer/graph.hpp"

namespace balancer {

namespace {

constexpr std::size_t kColumns = 11;

void check_header(const std::vector<std::string> &lines) {
  if (lines.empty()) throw ValidationError("empty dataset: missing header row");
  auto fields = csv::split_line(lines.front());
  std::string joined;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) joined.push_back(',');
    joined += csv::trim(fields[i]);
  }
  if (joined != kDatasetHeader)
    throw ValidationError("row 1: header mismatch; expected '" + std::string(kDatasetHeader) + "', got '" +
                          lines.front() + "'");
}

[[noreturn]] void fail(std::size_t row, std::string_view field, const std::string &what) {
  throw ValidationError("row " + std::to_string(row) + ": field '" + std::string(field) + "' " + what);
}

std::optional<double> parse_number(std::size_t row, std::string_view field, const std::string &cell) {
  const std::string text = csv::trim(cell);
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  const char *first = text.data();
  const char *last = text.data() + text.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) fail(row, field, "is not a number: '" + text + "'");
  if (!std::isfinite(v)) fail(row, field, "is not finite: '" + text + "'");
  return v;
}

int parse_categorical(std::size_t row, std::string_view field, std::optional<double> v, std::initializer_list<int> domain) {
  const double x = v.value_or(0.0);
  const double r = std::round(x);
  if (r != x || std::find(domain.begin(), domain.end(), static_cast<int>(r)) == domain.end()) {
    std::string allowed;
    for (int d : domain) allowed += (allowed.empty() ? "" : ",") + std::to_string(d);
    fail(row, field, "value " + csv::format_double(x) + " outside domain {" + allowed + "}");
  }
  return static_cast<int>(r);
}

double neutral_value(Factor f) { return f == Factor::ExchangeRate ? 1.0 : 0.0; }

FactorRecord neutral_record(std::string source, std::string target) {
  FactorRecord r;
  r.source = std::move(source);
  r.target = std::move(target);
  r.exchange_rate_ratio = neutral_value(Factor::ExchangeRate);
  return r;
}

}  // namespace

std::string_view factor_column(Factor f) noexcept {
  switch (f) {
  case Factor::Export: return "export";
  case Factor::Import: return "import";
  case Factor::Religious: return "religious_conflicts";
  case Factor::Diplomatic: return "diplomatic";
  case Factor::War: return "war";
  case Factor::Border: return "border";
  case Factor::IcjCase: return "icj_case";
  case Factor::PeaceTreaty: return "peace_treaty";
  case Factor::ExchangeRate: return "exchange_rate_ratio";
  }
  return "?";
}

double FactorRecord::value(Factor f) const noexcept {
  switch (f) {
  case Factor::Export: return exports;
  case Factor::Import: return imports;
  case Factor::Religious: return religious_conflicts;
  case Factor::Diplomatic: return diplomatic;
  case Factor::War: return war;
  case Factor::Border: return border;
  case Factor::IcjCase: return icj_case;
  case Factor::PeaceTreaty: return peace_treaty;
  case Factor::ExchangeRate: return exchange_rate_ratio;
  }
  return 0.0;
}

double NormalizedRecord::value(Factor f) const noexcept {
  return const_cast<NormalizedRecord *>(this)->value(f);
}

double &NormalizedRecord::value(Factor f) noexcept {
  switch (f) {
  case Factor::Export: return exports;
  case Factor::Import: return imports;
  case Factor::Religious: return religious_conflicts;
  case Factor::Diplomatic: return diplomatic;
  case Factor::War: return war;
  case Factor::Border: return border;
  case Factor::IcjCase: return icj_case;
  case Factor::PeaceTreaty: return peace_treaty;
  case Factor::ExchangeRate: break;
  }
  return exchange_rate_ratio;
}

ExchangeTransform parse_exchange_transform(std::string_view s) {
  if (s == "ratio_minus_one") return ExchangeTransform::RatioMinusOne;
  if (s == "raw") return ExchangeTransform::Raw;
  if (s == "log") return ExchangeTransform::Log;
  throw ValidationError("unknown exchange transform '" + std::string(s) + "' (expected ratio_minus_one|raw|log)");
}

std::string_view to_string(ExchangeTransform t) noexcept {
  switch (t) {
  case ExchangeTransform::RatioMinusOne: return "ratio_minus_one";
  case ExchangeTransform::Raw: return "raw";
  case ExchangeTransform::Log: return "log";
  }
  return "?";
}

FactorStats compute_stats(const std::vector<FactorRecord> &records) {
  FactorStats stats;
  if (records.empty()) return stats;
  for (std::size_t k = 0; k < kFactorCount; ++k) {
    const auto f = static_cast<Factor>(k);
    stats[f] = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto &r : records) {
      stats[f].min = std::min(stats[f].min, r.value(f));
      stats[f].max = std::max(stats[f].max, r.value(f));
    }
  }
  return stats;
}

Dataset parse_dataset(std::istream &in, const IngestOptions &opts) {
  const auto lines = csv::read_lines(in);
  check_header(lines);

  Dataset ds;
  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string> nations;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t row = i + 1;
    if (csv::trim(lines[i]).empty()) continue;
    const auto cells = csv::split_line(lines[i]);
    if (cells.size() != kColumns)
      throw ValidationError("row " + std::to_string(row) + ": malformed row, expected " + std::to_string(kColumns) +
                            " fields, got " + std::to_string(cells.size()));

    FactorRecord rec;
    rec.source = normalize_name(cells[0]);
    rec.target = normalize_name(cells[1]);
    if (rec.source.empty()) fail(row, "source", "is empty");
    if (rec.target.empty()) fail(row, "target", "is empty");
    if (rec.source == rec.target) fail(row, "target", "equals source '" + rec.source + "'");

    std::array<std::optional<double>, kFactorCount> raw;
    for (std::size_t k = 0; k < kFactorCount; ++k) {
      const auto f = static_cast<Factor>(k);
      raw[k] = parse_number(row, factor_column(f), cells[k + 2]);
      if (!raw[k]) {
        if (!opts.impute) fail(row, factor_column(f), "is empty (use --impute to fill neutral values)");
        raw[k] = neutral_value(f);
        ds.warnings.push_back("row " + std::to_string(row) + ": imputed empty '" + std::string(factor_column(f)) + "'");
      }
    }
    auto at = [&](Factor f) { return raw[static_cast<std::size_t>(f)]; };

    rec.exports = *at(Factor::Export);
    rec.imports = *at(Factor::Import);
    if (rec.exports < 0) fail(row, "export", "is negative");
    if (rec.imports < 0) fail(row, "import", "is negative");
    rec.religious_conflicts = parse_categorical(row, "religious_conflicts", at(Factor::Religious), {0, 1, 2, 3, 4});
    rec.diplomatic = parse_categorical(row, "diplomatic", at(Factor::Diplomatic), {0, 1});
    rec.war = parse_categorical(row, "war", at(Factor::War), {0, 1});
    rec.border = parse_categorical(row, "border", at(Factor::Border), {-1, 0, 1, 2});
    rec.icj_case = parse_categorical(row, "icj_case", at(Factor::IcjCase), {0, 1});
    rec.peace_treaty = parse_categorical(row, "peace_treaty", at(Factor::PeaceTreaty), {0, 1});
    rec.exchange_rate_ratio = *at(Factor::ExchangeRate);
    if (rec.exchange_rate_ratio <= 0) fail(row, "exchange_rate_ratio", "must be positive");

    if (!seen.emplace(rec.source, rec.target).second)
      throw ValidationError("row " + std::to_string(row) + ": duplicate directed pair " + rec.source + " -> " +
                            rec.target);
    nations.insert(rec.source);
    nations.insert(rec.target);
    ds.records.push_back(std::move(rec));
  }

  ds.nations.assign(nations.begin(), nations.end());

  std::vector<std::pair<std::string, std::string>> missing;
  for (const auto &s : ds.nations)
    for (const auto &t : ds.nations)
      if (s != t && !seen.count({s, t})) missing.emplace_back(s, t);
  if (!missing.empty()) {
    if (!opts.impute) {
      std::string msg = std::to_string(missing.size()) + " directed pair(s) missing:";
      for (std::size_t k = 0; k < missing.size() && k < 10; ++k)
        msg += " " + missing[k].first + "->" + missing[k].second;
      if (missing.size() > 10) msg += " ...";
      throw ValidationError(msg + " (use --impute to fill neutral rows)");
    }
    for (auto &[s, t] : missing) {
      ds.warnings.push_back("imputed missing direction " + s + " -> " + t);
      ds.records.push_back(neutral_record(s, t));
    }
    ds.imputed_rows = missing.size();
  }

  ds.stats = compute_stats(ds.records);
  return ds;
}

Dataset load_dataset(const std::string &path, const IngestOptions &opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open dataset " + path);
  return parse_dataset(in, opts);
}

double normalize_minmax(double y, const FactorRange &range) {
  const double span = range.max - range.min;
  if (!(span > 0.0)) return 0.0;
  return (y - range.min) / span;
}

double normalize_border(double y, double max) {
  if (!(max > 0.0))
    throw ValidationError("border normalization needs a positive maximum (observed max " + csv::format_double(max) +
                          "); pass --border-domain-max 2 to use the domain maximum");
  return y / max;
}

double normalize_exchange(double ratio, ExchangeTransform transform) {
  if (!(ratio > 0.0) || !std::isfinite(ratio))
    throw ValidationError("exchange rate ratio must be positive, got " + csv::format_double(ratio));
  double t = ratio;
  switch (transform) {
  case ExchangeTransform::RatioMinusOne: t = ratio - 1.0; break;
  case ExchangeTransform::Raw: break;
  case ExchangeTransform::Log: t = std::log(ratio); break;
  }
  return t >= 0.0 ? 1.0 : -1.0;
}

NormalizedRecord normalize_record(const FactorRecord &rec, const FactorStats &stats, const IngestOptions &opts) {
  NormalizedRecord out;
  out.source = rec.source;
  out.target = rec.target;
  for (auto f : {Factor::Export, Factor::Import, Factor::Religious, Factor::Diplomatic, Factor::War, Factor::IcjCase,
                 Factor::PeaceTreaty})
    out.value(f) = normalize_minmax(rec.value(f), stats[f]);
  const double border_max = stats[Factor::Border].max > 0 ? stats[Factor::Border].max
                                                          : opts.border_max_override.value_or(stats[Factor::Border].max);
  out.border = normalize_border(rec.border, border_max);
  out.exchange_rate_ratio = normalize_exchange(rec.exchange_rate_ratio, opts.exchange_transform);
  return out;
}

std::vector<NormalizedRecord> normalize_dataset(const Dataset &ds, const IngestOptions &opts) {
  std::vector<NormalizedRecord> out;
  out.reserve(ds.records.size());
  for (const auto &r : ds.records) out.push_back(normalize_record(r, ds.stats, opts));
  return out;
}

std::string format_dataset_csv(const std::vector<FactorRecord> &records) {
  std::ostringstream os;
  os << kDatasetHeader << '\n';
  for (const auto &r : records) {
    os << csv::escape(r.source) << ',' << csv::escape(r.target) << ',' << csv::format_double(r.exports) << ','
       << csv::format_double(r.imports) << ',' << r.religious_conflicts << ',' << r.diplomatic << ',' << r.war << ','
       << r.border << ',' << r.icj_case << ',' << r.peace_treaty << ',' << csv::format_double(r.exchange_rate_ratio)
       << '\n';
  }
  return os.str();
}

std::string format_normalized_csv(const std::vector<NormalizedRecord> &records) {
  std::ostringstream os;
  os << kDatasetHeader << '\n';
  for (const auto &r : records) {
    os << csv::escape(r.source) << ',' << csv::escape(r.target);
    for (std::size_t k = 0; k < kFactorCount; ++k) os << ',' << csv::format_double(r.value(static_cast<Factor>(k)));
    os << '\n';
  }
  return os.str();
}

std::vector<NormalizedRecord> parse_normalized(std::istream &in) {
  const auto lines = csv::read_lines(in);
  check_header(lines);
  std::vector<NormalizedRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t row = i + 1;
    if (csv::trim(lines[i]).empty()) continue;
    const auto cells = csv::split_line(lines[i]);
    if (cells.size() != kColumns)
      throw ValidationError("row " + std::to_string(row) + ": malformed row, expected " + std::to_string(kColumns) +
                            " fields, got " + std::to_string(cells.size()));
    NormalizedRecord r;
    r.source = normalize_name(cells[0]);
    r.target = normalize_name(cells[1]);
    if (r.source.empty() || r.target.empty() || r.source == r.target)
      fail(row, "target", "does not form a valid directed pair");
    for (std::size_t k = 0; k < kFactorCount; ++k) {
      const auto f = static_cast<Factor>(k);
      auto v = parse_number(row, factor_column(f), cells[k + 2]);
      if (!v) fail(row, factor_column(f), "is empty");
      if (*v < -1.0 || *v > 1.0) fail(row, factor_column(f), "normalized value outside [-1,1]");
      r.value(f) = *v;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<NormalizedRecord> load_normalized(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open normalized dataset " + path);
  return parse_normalized(in);
}

}  // namespace balancer
