#pragma once

#include <stdexcept>
#include <string>

namespace metaforge {

enum class Errc {
    invalid_archive_init,
    missing_scores,
    dataset_mismatch,
    invalid_library,
    invalid_call,
    transport_error,
    rate_limited,
    context_too_long,
    unpriced_model,
    execution_failed,
    insufficient_data,
    parse_error,
    dataset_not_found,
    insufficient_agents,
    empty_split,
    undefined_value,
    bad_config,
    io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

  private:
    Errc code_;
};

}  // namespace metaforge
