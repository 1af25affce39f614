#pragma once

#include <algorithm>
#include <cctype>
#include <string_view>

namespace bm25inject {

namespace detail {

inline auto is_all_digits(std::string_view s) noexcept -> bool
{
    return !s.empty()
        && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace detail

/// Ordering used for document and query ids everywhere a deterministic order
/// is needed (tie-breaking, file output). Purely numeric ids (MSMARCO style)
/// compare by numeric value and come before non-numeric ids, which compare
/// lexicographically. It is a strict total order on strings.
inline auto id_less(std::string_view lhs, std::string_view rhs) noexcept -> bool
{
    bool lnum = detail::is_all_digits(lhs);
    bool rnum = detail::is_all_digits(rhs);
    if (lnum != rnum) {
        return lnum;
    }
    if (lnum) {
        auto strip = [](std::string_view s) {
            auto pos = s.find_first_not_of('0');
            return pos == std::string_view::npos ? std::string_view{} : s.substr(pos);
        };
        auto l = strip(lhs);
        auto r = strip(rhs);
        if (l.size() != r.size()) {
            return l.size() < r.size();
        }
        if (l != r) {
            return l < r;
        }
    }
    return lhs < rhs;
}

/// Transparent comparator for ordered containers keyed by id.
struct IdLess {
    using is_transparent = void;
    auto operator()(std::string_view lhs, std::string_view rhs) const noexcept -> bool
    {
        return id_less(lhs, rhs);
    }
};

}  // namespace bm25inject
