#include "metaforge/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

namespace metaforge {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_punct(unsigned char c) { return std::ispunct(c) != 0; }

std::string lowercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Bare option letter at the front of a normalized answer: "b", "b.", "b) ...".
std::optional<char> option_letter(const std::string& normalized) {
    if (normalized.empty()) return std::nullopt;
    unsigned char first = static_cast<unsigned char>(normalized[0]);
    if (!std::isalpha(first)) return std::nullopt;
    if (normalized.size() == 1) return normalized[0];
    unsigned char second = static_cast<unsigned char>(normalized[1]);
    if (second == '.' || second == ')' || second == ':' || second == ',' || second == ' ') {
        return normalized[0];
    }
    return std::nullopt;
}

// Canonical form of a numeric token, or nullopt if the token is not a number.
std::optional<std::string> canonical_number(const std::string& token) {
    std::string stripped;
    for (char c : token) {
        if (c == ',') continue;  // thousands separators
        stripped.push_back(c);
    }
    if (stripped.empty()) return std::nullopt;
    const char* begin = stripped.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + stripped.size()) return std::nullopt;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return std::string(buf);
}

bool is_article(const std::string& t) { return t == "a" || t == "an" || t == "the"; }

}  // namespace

std::string normalize_answer(const std::string& s) {
    std::string lowered = lowercase(s);

    // Collapse whitespace runs and trim.
    std::string collapsed;
    bool in_space = true;  // swallows leading whitespace
    for (unsigned char c : lowered) {
        if (is_space(c)) {
            if (!in_space) collapsed.push_back(' ');
            in_space = true;
        } else {
            collapsed.push_back(static_cast<char>(c));
            in_space = false;
        }
    }
    while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();

    // Strip surrounding punctuation.
    std::size_t b = 0;
    std::size_t e = collapsed.size();
    while (b < e && is_punct(static_cast<unsigned char>(collapsed[b]))) ++b;
    while (e > b && is_punct(static_cast<unsigned char>(collapsed[e - 1]))) --e;
    std::string out = collapsed.substr(b, e - b);

    // Stripping can expose fresh surrounding whitespace ("' B '" -> "b").
    while (!out.empty() && out.front() == ' ') out.erase(out.begin());
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

double score_exact(const std::string& pred, const std::vector<std::string>& gold,
                   bool accept_option_letter) {
    std::string p = normalize_answer(pred);
    for (const auto& g : gold) {
        std::string gn = normalize_answer(g);
        if (!p.empty() && p == gn) return 1.0;
        if (accept_option_letter) {
            auto pl = option_letter(p);
            auto gl = option_letter(gn);
            if (pl && gl && *pl == *gl) return 1.0;
        }
    }
    return 0.0;
}

std::vector<std::string> f1_tokens(const std::string& s) {
    std::vector<std::string> tokens;
    std::istringstream iss(lowercase(s));
    std::string raw;
    while (iss >> raw) {
        // Surrounding punctuation never carries meaning ("York," -> "York").
        std::size_t b = 0;
        std::size_t e = raw.size();
        while (b < e && is_punct(static_cast<unsigned char>(raw[b]))) ++b;
        while (e > b && is_punct(static_cast<unsigned char>(raw[e - 1]))) --e;
        std::string tok = raw.substr(b, e - b);
        if (tok.empty() || is_article(tok)) continue;

        if (auto num = canonical_number(tok)) {
            tokens.push_back(*num);
            continue;
        }
        // Non-numeric tokens lose all remaining punctuation ("it's" -> "its").
        std::string cleaned;
        for (char c : tok) {
            if (!is_punct(static_cast<unsigned char>(c))) cleaned.push_back(c);
        }
        if (!cleaned.empty() && !is_article(cleaned)) tokens.push_back(cleaned);
    }
    return tokens;
}

namespace {

double f1_single(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
    if (pred.empty() && gold.empty()) return 1.0;
    if (pred.empty() || gold.empty()) return 0.0;
    std::map<std::string, int> gold_counts;
    for (const auto& t : gold) gold_counts[t]++;
    int overlap = 0;
    for (const auto& t : pred) {
        auto it = gold_counts.find(t);
        if (it != gold_counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    if (overlap == 0) return 0.0;
    double precision = static_cast<double>(overlap) / static_cast<double>(pred.size());
    double recall = static_cast<double>(overlap) / static_cast<double>(gold.size());
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

double score_f1(const std::string& pred, const std::vector<std::string>& gold) {
    std::vector<std::string> p = f1_tokens(pred);
    double best = 0.0;
    bool any = false;
    for (const auto& g : gold) {
        best = std::max(best, f1_single(p, f1_tokens(g)));
        any = true;
    }
    return any ? best : 0.0;
}

double score_prediction(const std::string& pred, const Example& example) {
    switch (example.kind) {
        case DatasetKind::exact_match: return score_exact(pred, example.gold, false);
        case DatasetKind::multiple_choice: return score_exact(pred, example.gold, true);
        case DatasetKind::f1: return score_f1(pred, example.gold);
    }
    return 0.0;
}

}  // namespace metaforge
