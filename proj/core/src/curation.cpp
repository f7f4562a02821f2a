#include "metaforge/curation.hpp"

#include "metaforge/errors.hpp"

namespace metaforge {

CuratedContext curate_cumulative(const Archive& archive) {
    CuratedContext ctx;
    ctx.mode = CurationMode::cumulative;
    ctx.records = archive.entries();
    return ctx;
}

CuratedContext curate_parallel(const Archive& archive) {
    if (archive.initial_count() == 0) {
        throw Error(Errc::invalid_library, "archive holds no initial library to parallel-sample from");
    }
    CuratedContext ctx;
    ctx.mode = CurationMode::parallel;
    ctx.records.assign(archive.entries().begin(),
                       archive.entries().begin() +
                           static_cast<std::ptrdiff_t>(archive.initial_count()));
    return ctx;
}

CuratedContext curate_evolutionary(const Archive& archive, std::size_t k) {
    CuratedContext ctx;
    ctx.mode = CurationMode::evolutionary;
    ctx.records = archive.top_k(k);
    return ctx;
}

CuratedContext curate(const Archive& archive, CurationMode mode, std::size_t k) {
    switch (mode) {
        case CurationMode::cumulative: return curate_cumulative(archive);
        case CurationMode::parallel: return curate_parallel(archive);
        case CurationMode::evolutionary: return curate_evolutionary(archive, k);
    }
    return curate_cumulative(archive);
}

}  // namespace metaforge
