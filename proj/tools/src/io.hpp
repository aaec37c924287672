#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "msl/decomposition.hpp"

namespace msl::cli {

using json = nlohmann::json;

// Parse failures raise malformed-JSON with file:line:column.
json read_json_file(const std::string &path);
json parse_json_text(const std::string &text, const std::string &origin);

cplx to_complex(const json &j);
json from_complex(cplx z);
std::vector<cplx> to_points(const json &j, const char *key);
json from_points(const std::vector<cplx> &pts);
CMat to_matrix(const json &j);
json from_matrix(const CMat &m);
json from_real(const RVec &v);
CVec to_cvec(const json &j);

BlaschkeProduct to_blaschke(const json &j);
std::vector<BlaschkeProduct> to_blaschke_list(const json &j, const char *key);
DiscFunction to_disc_function(const json &j);
MatrixInnerFunction to_matrix_inner(const json &j);
ArcSet to_arcset(const json &j);

} // namespace msl::cli
