#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hcs/circuit.hpp"

namespace hcs {

// Shadow records are stored one JSON object per line:
//
//   {"version":1,"n_qubits":4,"p":0.5,"master_seed":7,"shot_index":0,
//    "initial_state":"ghz","layers":[
//      {"kind":"M","events":[[0,"X",1],[3,"Z",0]]},
//      {"kind":"U","parity":0,"gates":[["+XZ","-ZI","+IX","+YY"], ...]}]}
//
// Each gate lists the signed images of XI, ZI, IX, IZ. Doubles are printed
// in shortest round-trip form, so reading back is bit-exact. Appending
// records to an existing file keeps it valid.

std::string record_to_line(const ShadowRecord& record);
/// Throws ParseError (line number `line_no`) on malformed input.
ShadowRecord record_from_line(const std::string& line, std::size_t line_no = 1);

void write_shadows(std::ostream& out, const std::vector<ShadowRecord>& records);
void write_shadows(const std::filesystem::path& path, const std::vector<ShadowRecord>& records,
                   bool append = false);

/// Blank lines and lines starting with '#' are skipped.
std::vector<ShadowRecord> read_shadows(std::istream& in);
std::vector<ShadowRecord> read_shadows(const std::filesystem::path& path);

}  // namespace hcs
