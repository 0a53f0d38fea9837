#ifndef ROBBA_IO_HPP
#define ROBBA_IO_HPP

#include <json.hpp>

#include "robba/divide.hpp"
#include "robba/sigma_module.hpp"
#include "robba/slopes.hpp"

namespace robba {

using Json = nlohmann::json;

std::string rational_to_string(const Rational &r);
Rational rational_from_string(const std::string &s);

Json context_to_json(const RingContext &ctx);
ContextPtr context_from_json(const Json &j);

Json element_to_json(const LaurentElement &x);
LaurentElement element_from_json(const Json &j, const ContextPtr &ctx);

Json matrix_to_json(const ElemMatrix &m);
ElemMatrix matrix_from_json(const Json &j, const ContextPtr &ctx);

Json module_to_json(const SigmaModule &m);
SigmaModule module_from_json(const Json &j);

Json polygon_to_json(const NewtonPolygon &p);
NewtonPolygon polygon_from_json(const Json &j);

Json certificate_to_json(const FactorizationCertificate &c);
Json report_to_json(const SlopeReport &r);

Json load_json_file(const std::string &path);
void write_json_file(const std::string &path, const Json &j);

} // namespace robba

#endif
