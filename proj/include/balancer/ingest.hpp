#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace balancer {

enum class Factor : std::size_t {
  Export,
  Import,
  Religious,
  Diplomatic,
  War,
  Border,
  IcjCase,
  PeaceTreaty,
  ExchangeRate,
};
inline constexpr std::size_t kFactorCount = 9;

/// Column name as it appears in the dataset header.
std::string_view factor_column(Factor f) noexcept;

inline constexpr std::string_view kDatasetHeader =
    "source,target,export,import,religious_conflicts,diplomatic,war,border,icj_case,peace_treaty,"
    "exchange_rate_ratio";

/// One directed row of raw factor values.
struct FactorRecord {
  std::string source;
  std::string target;
  double exports = 0.0;  // USD
  double imports = 0.0;  // USD
  int religious_conflicts = 0;  // 0..4
  int diplomatic = 0;  // 0/1
  int war = 0;  // 0/1
  int border = 0;  // -1,0,1,2
  int icj_case = 0;  // 0/1
  int peace_treaty = 0;  // 0/1
  double exchange_rate_ratio = 1.0;  // > 0

  double value(Factor f) const noexcept;
  friend bool operator==(const FactorRecord &, const FactorRecord &) = default;
};

struct FactorRange {
  double min = 0.0;
  double max = 0.0;
};

/// Global min/max per factor over every directed row.
struct FactorStats {
  std::array<FactorRange, kFactorCount> ranges{};
  const FactorRange &operator[](Factor f) const noexcept { return ranges[static_cast<std::size_t>(f)]; }
  FactorRange &operator[](Factor f) noexcept { return ranges[static_cast<std::size_t>(f)]; }
};

FactorStats compute_stats(const std::vector<FactorRecord> &records);

struct NormalizedRecord {
  std::string source;
  std::string target;
  double exports = 0.0;
  double imports = 0.0;
  double religious_conflicts = 0.0;
  double diplomatic = 0.0;
  double war = 0.0;
  double border = 0.0;
  double icj_case = 0.0;
  double peace_treaty = 0.0;
  double exchange_rate_ratio = 0.0;

  double value(Factor f) const noexcept;
  double &value(Factor f) noexcept;
  friend bool operator==(const NormalizedRecord &, const NormalizedRecord &) = default;
};

enum class ExchangeTransform { RatioMinusOne, Raw, Log };

ExchangeTransform parse_exchange_transform(std::string_view s);
std::string_view to_string(ExchangeTransform t) noexcept;

struct IngestOptions {
  /// Fill missing cells and missing directions with neutral values instead of failing.
  bool impute = false;
  ExchangeTransform exchange_transform = ExchangeTransform::RatioMinusOne;
  /// Divisor for the border factor when the observed maximum is not positive.
  std::optional<double> border_max_override;
};

struct Dataset {
  std::vector<std::string> nations;  // sorted, normalized
  std::vector<FactorRecord> records;
  FactorStats stats;
  std::vector<std::string> warnings;
  std::size_t imputed_rows = 0;
};

/// Parses a dataset CSV. Throws ValidationError with the row number (1-based
/// file line) and field name on malformed or out-of-domain input.
Dataset parse_dataset(std::istream &in, const IngestOptions &opts = {});
Dataset load_dataset(const std::string &path, const IngestOptions &opts = {});

/// (y - min) / (max - min); 0 when max == min.
double normalize_minmax(double y, const FactorRange &range);
/// y / max. Throws ValidationError when max <= 0.
double normalize_border(double y, double max);
/// +1 when the transformed ratio is >= 0, -1 otherwise. Throws on ratio <= 0.
double normalize_exchange(double ratio, ExchangeTransform transform = ExchangeTransform::RatioMinusOne);

NormalizedRecord normalize_record(const FactorRecord &rec, const FactorStats &stats, const IngestOptions &opts);
std::vector<NormalizedRecord> normalize_dataset(const Dataset &ds, const IngestOptions &opts = {});

std::string format_dataset_csv(const std::vector<FactorRecord> &records);
std::string format_normalized_csv(const std::vector<NormalizedRecord> &records);

/// Reads a normalized CSV (same header as the raw dataset). Values must be
/// finite and within [-1, 1].
std::vector<NormalizedRecord> parse_normalized(std::istream &in);
std::vector<NormalizedRecord> load_normalized(const std::string &path);

}  // namespace balancer
