#pragma once

#include <functional>
#include <string_view>

namespace bm25inject {

/// Receives non-fatal warnings (reordered run files, degenerate lists, ...).
using warning_sink = std::function<void(std::string_view)>;

inline void warn(const warning_sink& sink, std::string_view message)
{
    if (sink) {
        sink(message);
    }
}

}  // namespace bm25inject
