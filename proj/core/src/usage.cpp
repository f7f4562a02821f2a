#include "metaforge/usage.hpp"

#include <cmath>
#include <fstream>

#include "metaforge/backend.hpp"
#include "metaforge/errors.hpp"

namespace metaforge {

std::int64_t total_chars(const ModelCall& call) {
    std::int64_t n = 0;
    for (const auto& m : call.messages) n += static_cast<std::int64_t>(m.content.size());
    return n;
}

void UsageLedger::add(UsageEntry entry) {
    if (entry.tokens_in < 0 || entry.tokens_out < 0) {
        throw Error(Errc::bad_config, "negative token count in usage entry");
    }
    calls_.push_back(std::move(entry));
}

void UsageLedger::merge(const UsageLedger& other) {
    calls_.insert(calls_.end(), other.calls_.begin(), other.calls_.end());
}

std::map<std::string, UsageTotals> UsageLedger::totals() const {
    std::map<std::string, UsageTotals> t;
    for (const auto& c : calls_) {
        auto& entry = t[c.model_id];
        entry.tokens_in += c.tokens_in;
        entry.tokens_out += c.tokens_out;
    }
    return t;
}

nlohmann::json UsageLedger::totals_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [model, t] : totals()) {
        j[model] = {{"tokens_in", t.tokens_in}, {"tokens_out", t.tokens_out}};
    }
    return j;
}

void PricingTable::set(const std::string& model_id, ModelPrice price) {
    if (price.usd_per_1m_tokens_in < 0 || price.usd_per_1m_tokens_out < 0) {
        throw Error(Errc::bad_config, "negative price for model '" + model_id + "'");
    }
    prices_[model_id] = price;
}

bool PricingTable::has(const std::string& model_id) const { return prices_.count(model_id) > 0; }

ModelPrice PricingTable::get(const std::string& model_id) const {
    auto it = prices_.find(model_id);
    if (it == prices_.end()) {
        throw Error(Errc::unpriced_model, "no price for model '" + model_id + "'");
    }
    return it->second;
}

PricingTable PricingTable::from_json(const nlohmann::json& j) {
    PricingTable t;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& v = it.value();
        t.set(it.key(), ModelPrice{v.at("usd_per_1m_tokens_in").get<double>(),
                                   v.at("usd_per_1m_tokens_out").get<double>()});
    }
    return t;
}

PricingTable PricingTable::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot open pricing table " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, "pricing table " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

PricingTable PricingTable::builtin_default() {
    PricingTable t;
    t.set("sim-worker", ModelPrice{0.50, 1.50});
    t.set("sim-meta", ModelPrice{2.50, 10.00});
    return t;
}

nlohmann::json PricingTable::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [model, p] : prices_) {
        j[model] = {{"usd_per_1m_tokens_in", p.usd_per_1m_tokens_in},
                    {"usd_per_1m_tokens_out", p.usd_per_1m_tokens_out}};
    }
    return j;
}

MicroUsd call_cost(const UsageEntry& entry, const PricingTable& prices) {
    ModelPrice p = prices.get(entry.model_id);
    // USD-per-1M-token rate applied to a token count lands directly in
    // micro-USD: tokens * usd_per_1M / 1e6 USD == tokens * usd_per_1M uUSD.
    double usd_micros = static_cast<double>(entry.tokens_in) * p.usd_per_1m_tokens_in +
                        static_cast<double>(entry.tokens_out) * p.usd_per_1m_tokens_out;
    return static_cast<MicroUsd>(std::floor(usd_micros + 0.5));
}

MicroUsd ledger_cost(const UsageLedger& ledger, const PricingTable& prices) {
    MicroUsd total = 0;
    for (const auto& c : ledger.calls()) total += call_cost(c, prices);
    return total;
}

}  // namespace metaforge
