#ifndef ISPO_IO_TABLE_H_
#define ISPO_IO_TABLE_H_

#include <string>
#include <vector>

namespace ispo::io {

// Aligned-column plain-text table. Numeric-looking cells are right-aligned.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header);
  void AddRow(std::vector<std::string> row);
  std::string Render() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace ispo::io

#endif  // ISPO_IO_TABLE_H_
