#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bm25inject {

/// Bad input data: malformed files, duplicate ids, violated preconditions on
/// data. The CLI maps these to exit code 2.
class data_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or arguments (exit code 1 at the CLI).
class usage_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A local score list whose statistics cannot normalize it: all scores equal
/// (Min-Max, Standard) or a zero sum (Sum).
class degenerate_list_error : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// The external scorer failed or replied with something unusable. Carries
/// the pair ids of the batch that failed (exit code 3 at the CLI).
class transport_error : public std::runtime_error {
  public:
    transport_error(const std::string& what, std::vector<std::string> pair_ids)
        : std::runtime_error(what), m_pair_ids(std::move(pair_ids))
    {}

    [[nodiscard]] auto pair_ids() const noexcept -> const std::vector<std::string>&
    {
        return m_pair_ids;
    }

  private:
    std::vector<std::string> m_pair_ids;
};

}  // namespace bm25inject
