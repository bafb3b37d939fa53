#ifndef MCG_IO_HPP
#define MCG_IO_HPP

// Dataset ingestion and JSON reports.

#include <json.hpp>

#include <istream>
#include <string>

#include "mcg/inference.hpp"
#include "mcg/selection.hpp"

namespace mcg {

/// One value per line; an optional single header line; LF or CRLF; blank
/// lines ignored. Throws DomainError on malformed or non-positive input.
Dataset parse_dataset(std::istream& in, const std::string& label);

Dataset read_dataset(const std::string& path);

using Json = nlohmann::ordered_json;

Json to_json(const FitResult& fit);
Json to_json(const GofReport& report);

/// {"schema_version": 1, "command": ...} header shared by every document.
Json document(const std::string& command);

}  // namespace mcg

#endif  // MCG_IO_HPP
