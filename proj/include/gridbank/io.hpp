#ifndef GRIDBANK_IO_HPP
#define GRIDBANK_IO_HPP

#include <span>
#include <string>
#include <string_view>

#include "gridbank/treegrid.hpp"

namespace gridbank {

// Bit-exact serialization. All files are UTF-8 with LF line endings and
// no BOM; every reader rejects non-UTF-8 input with a diagnostic instead
// of substituting characters. Canonical renderings are deterministic:
// render(parse(bytes)) == bytes for canonical files.
//
// Grid TSV layout (fixed column order):
//   idx  token  norm  src  macro  orth  d0  d1 ...
// Merged cells carry their value on the first row of the span and the
// continuation marker "|" below; discontinuous constituent parts are
// wrapped in angle brackets as in "⟨pred⟩". The reserved characters
// tab, newline, "|", "⟨" and "⟩" may not occur in any field value.
// An optional first line "#meta\tid=...\tcentury=..." carries metadata.

struct GridFile {
  LayeredText doc;
  GridDocument grid;
};

// Throws EncodingError, ParseError (with line/column) or ValidationError
// (carrying the core validation report).
GridFile read_grid(std::string_view bytes);
std::string write_grid(const LayeredText& doc, const GridDocument& grid);

// Dependency TSV: one token per line `id form norm pos head deprel`,
// 1-based ids, head 0 marks the root, sentences separated by one blank
// line. Throws ParseError naming the line and CycleDetected when the
// head links of a sentence contain a cycle.
std::vector<DependencyGraph> read_dependency(std::string_view bytes);
std::string write_dependency(std::span<const DependencyGraph> sentences);

// Whitespace tokenization of raw text: runs of ASCII whitespace separate
// tokens, fine tokens start out identical to the source tokens.
LayeredText ingest_plaintext(std::string_view bytes);

struct StandoffDoc {
  LayeredText doc;
  Forest forest;
};

// Re-import of the three standoff files written by export_standoff.
StandoffDoc read_standoff(std::string_view text_xml, std::string_view mark_xml,
                          std::string_view struct_xml);

// File helpers. write_file_atomic writes to a temporary sibling and
// renames over the target so partial output never survives.
std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, std::string_view bytes);

} // namespace gridbank

#endif
