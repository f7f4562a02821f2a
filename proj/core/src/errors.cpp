#include "metaforge/errors.hpp"

namespace metaforge {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::invalid_archive_init: return "InvalidArchiveInit";
        case Errc::missing_scores: return "MissingScores";
        case Errc::dataset_mismatch: return "DatasetMismatch";
        case Errc::invalid_library: return "InvalidLibrary";
        case Errc::invalid_call: return "InvalidCall";
        case Errc::transport_error: return "TransportError";
        case Errc::rate_limited: return "RateLimited";
        case Errc::context_too_long: return "ContextTooLong";
        case Errc::unpriced_model: return "UnpricedModel";
        case Errc::execution_failed: return "ExecutionFailed";
        case Errc::insufficient_data: return "InsufficientData";
        case Errc::parse_error: return "ParseError";
        case Errc::dataset_not_found: return "DatasetNotFound";
        case Errc::insufficient_agents: return "InsufficientAgents";
        case Errc::empty_split: return "EmptySplit";
        case Errc::undefined_value: return "Undefined";
        case Errc::bad_config: return "BadConfig";
        case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

}  // namespace metaforge
