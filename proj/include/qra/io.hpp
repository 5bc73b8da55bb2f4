#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qra/frames.hpp"

namespace qra {

using Json = nlohmann::ordered_json;

// one top-level key (or array element) per line, everything below compact;
// arrays of objects under a top-level key get one object per line
std::string canonical_dump(const Json& j);

// parse errors become StructuralError carrying the source name and byte offset
Json parse_json_text(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

Json algebra_to_json(const FinAlgebra& A);
FinAlgebra algebra_from_json(const Json& j);
Json frame_to_json(const Frame& W);
Frame frame_from_json(const Json& j);

// helpers shared by the other file formats
std::vector<int> json_int_array(const Json& j, const char* what, int lo, int hi);
std::vector<std::vector<int>> json_int_matrix(const Json& j, const char* what, int rows, int cols, int lo, int hi);
const Json& json_field(const Json& j, const char* key);

// bundled data compiled into the library; paths are relative to data/
std::vector<std::string> bundled_files();
const std::string& bundled_text(const std::string& rel);
std::vector<std::string> bundled_frame_names();
Frame bundled_frame(const std::string& name);

}  // namespace qra
