#include "metaforge/dataset.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "metaforge/errors.hpp"
#include "metaforge/hashing.hpp"

namespace metaforge {

namespace {

std::uint64_t bounded(std::uint64_t h, std::uint64_t n) {
    // Multiply-shift keeps the map stable across platforms.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(h) * static_cast<unsigned __int128>(n)) >> 64);
}

}  // namespace

void deterministic_shuffle(std::vector<Example>& items, std::uint64_t seed) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
        std::uint64_t h = hash_mix(seed, static_cast<std::uint64_t>(i));
        std::size_t j = static_cast<std::size_t>(bounded(h, i + 1));
        std::swap(items[i], items[j]);
    }
}

DatasetSplits load_dataset(const std::filesystem::path& path, DatasetKind default_kind,
                           std::size_t n_train, std::size_t n_test, std::uint64_t seed,
                           int train_repetitions) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::dataset_not_found, "cannot open dataset file " + path.string());
    }

    std::vector<Example> all;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw Error(Errc::parse_error,
                        path.string() + ":" + std::to_string(line_no) + ": invalid JSON line");
        }
        try {
            Example ex;
            ex.example_id = j.at("example_id").get<std::string>();
            ex.question = j.at("question").get<std::string>();
            for (const auto& g : j.at("gold")) ex.gold.push_back(g.get<std::string>());
            ex.kind = j.contains("kind")
                          ? dataset_kind_from_string(j["kind"].get<std::string>())
                          : default_kind;
            all.push_back(std::move(ex));
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::parse_error, path.string() + ":" + std::to_string(line_no) + ": " +
                                               e.what());
        }
    }

    if (all.size() < n_train + n_test) {
        throw Error(Errc::insufficient_data,
                    path.string() + " holds " + std::to_string(all.size()) +
                        " examples; need " + std::to_string(n_train + n_test));
    }

    deterministic_shuffle(all, seed);

    std::string id = path.stem().string();
    DatasetSplits splits;
    splits.train.id = id;
    splits.train.split = Split::train;
    splits.train.repetitions = train_repetitions;
    splits.train.examples.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
    splits.test.id = id;
    splits.test.split = Split::test;
    splits.test.repetitions = 1;
    splits.test.examples.assign(all.begin() + static_cast<std::ptrdiff_t>(n_train),
                                all.begin() + static_cast<std::ptrdiff_t>(n_train + n_test));
    return splits;
}

}  // namespace metaforge
