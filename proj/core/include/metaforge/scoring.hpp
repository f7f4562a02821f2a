#pragma once

#include <string>
#include <vector>

#include "metaforge/dataset.hpp"

namespace metaforge {

// Normalization for exact matching: lowercase, trim, collapse internal
// whitespace, strip surrounding punctuation.
std::string normalize_answer(const std::string& s);

// 1 iff the normalized prediction equals some normalized gold answer. With
// accept_option_letter (multiple-choice), a bare option letter also matches
// a gold alternative that starts with that letter.
double score_exact(const std::string& pred, const std::vector<std::string>& gold,
                   bool accept_option_letter = false);

// Token-level bag-overlap F1 after reading-comprehension normalization
// (lowercase, articles dropped, punctuation stripped, numbers compared by
// value), maximized over gold alternatives. Empty vs empty scores 1; a
// one-sided empty scores 0.
double score_f1(const std::string& pred, const std::vector<std::string>& gold);

// Dispatch on the example's kind.
double score_prediction(const std::string& pred, const Example& example);

// F1 token stream, exposed for tests.
std::vector<std::string> f1_tokens(const std::string& s);

}  // namespace metaforge
