#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "metaforge/types.hpp"

namespace metaforge {

struct UsageEntry {
    std::string model_id;
    std::int64_t tokens_in = 0;
    std::int64_t tokens_out = 0;
};

struct UsageTotals {
    std::int64_t tokens_in = 0;
    std::int64_t tokens_out = 0;
};

// Per-call token accounting. Each execution builds a private ledger; joins
// merge them in a deterministic order.
class UsageLedger {
  public:
    void add(UsageEntry entry);
    void merge(const UsageLedger& other);

    const std::vector<UsageEntry>& calls() const { return calls_; }
    std::map<std::string, UsageTotals> totals() const;
    std::size_t call_count() const { return calls_.size(); }
    bool empty() const { return calls_.empty(); }

    nlohmann::json totals_json() const;

  private:
    std::vector<UsageEntry> calls_;
};

struct ModelPrice {
    double usd_per_1m_tokens_in = 0.0;
    double usd_per_1m_tokens_out = 0.0;
};

class PricingTable {
  public:
    void set(const std::string& model_id, ModelPrice price);
    bool has(const std::string& model_id) const;
    ModelPrice get(const std::string& model_id) const;  // throws UnpricedModel

    static PricingTable from_json(const nlohmann::json& j);
    static PricingTable from_file(const std::filesystem::path& path);

    // Prices for the bundled simulator models.
    static PricingTable builtin_default();

    nlohmann::json to_json() const;

  private:
    std::map<std::string, ModelPrice> prices_;
};

// Micro-USD cost of one call: tokens * USD-per-1M-token rate, rounded
// half-up per call.
MicroUsd call_cost(const UsageEntry& entry, const PricingTable& prices);

// Sum of per-call costs, so ledger concatenation is cost-additive.
MicroUsd ledger_cost(const UsageLedger& ledger, const PricingTable& prices);

}  // namespace metaforge
