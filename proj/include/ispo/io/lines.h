#ifndef ISPO_IO_LINES_H_
#define ISPO_IO_LINES_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ispo::io {

// Splits on LF, drops a trailing CR from each line, and omits the empty
// piece after a final LF.
std::vector<std::string_view> SplitLines(std::string_view text);

std::vector<std::string_view> Split(std::string_view text, char sep);

// Throws IoError.
std::string ReadFile(const std::filesystem::path &path);
void WriteFile(const std::filesystem::path &path, std::string_view content);

}  // namespace ispo::io

#endif  // ISPO_IO_LINES_H_
