#pragma once

#include <string>
#include <vector>

namespace kgwave {

/// Shortest decimal form that round-trips a double (up to 17 significant digits).
[[nodiscard]] std::string format_double(double v);

/** Row-oriented CSV assembly with RFC-style quoting where needed. */
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(std::vector<std::string> cells);
    [[nodiscard]] std::string str() const;
    [[nodiscard]] std::size_t rows() const { return rows_.size(); }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Write text to a file, or to stdout when path is empty or "-".
void write_text_output(const std::string& path, const std::string& text);

} // namespace kgwave
