#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "metaforge/types.hpp"

namespace metaforge {

struct Example {
    std::string example_id;
    std::string question;
    std::vector<std::string> gold;  // acceptable answers
    DatasetKind kind = DatasetKind::exact_match;
};

// One split of a dataset. `repetitions` is how many times each example is
// evaluated per agent (variance reduction on small train sets).
struct Dataset {
    std::string id;
    std::vector<Example> examples;
    Split split = Split::train;
    int repetitions = 1;

    std::size_t size() const { return examples.size(); }
};

struct DatasetSplits {
    Dataset train;
    Dataset test;
};

// Reads a JSON-lines file (fields example_id, question, gold, kind), applies
// a seeded shuffle, and takes the first n_train examples as train and the
// next n_test as test. Deterministic for a given seed.
DatasetSplits load_dataset(const std::filesystem::path& path, DatasetKind default_kind,
                           std::size_t n_train, std::size_t n_test, std::uint64_t seed,
                           int train_repetitions = 1);

// Seeded Fisher-Yates with an explicit generator so splits never depend on
// standard-library internals.
void deterministic_shuffle(std::vector<Example>& items, std::uint64_t seed);

}  // namespace metaforge
