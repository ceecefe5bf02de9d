#ifndef SMTLAB_ERROR_HPP
#define SMTLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace smtlab
{

// Machine-readable classification carried by every library error. The CLI
// maps these to exit codes and report fields.
enum class error_code {
    input,
    resource_limit,
    precision,
    lemma_violation,
    precondition,
    geometry,
    quadrature,
    degeneracy,
    consistency,
    schema,
};

const char *to_string(error_code c) noexcept;

class error : public std::runtime_error
{
public:
    error(error_code code, const std::string &what) : std::runtime_error(what), m_code(code) {}

    error_code code() const noexcept
    {
        return m_code;
    }

private:
    error_code m_code;
};

struct input_error : error {
    explicit input_error(const std::string &w) : error(error_code::input, w) {}
};

struct resource_error : error {
    explicit resource_error(const std::string &w) : error(error_code::resource_limit, w) {}
};

struct precision_error : error {
    explicit precision_error(const std::string &w) : error(error_code::precision, w) {}
};

struct precondition_error : error {
    explicit precondition_error(const std::string &w) : error(error_code::precondition, w) {}
};

struct geometry_error : error {
    explicit geometry_error(const std::string &w) : error(error_code::geometry, w) {}
};

struct quadrature_error : error {
    explicit quadrature_error(const std::string &w) : error(error_code::quadrature, w) {}
};

struct degeneracy_error : error {
    explicit degeneracy_error(const std::string &w) : error(error_code::degeneracy, w) {}
};

struct consistency_error : error {
    explicit consistency_error(const std::string &w) : error(error_code::consistency, w) {}
};

// Raised when a constructive selection fails its guaranteed postcondition;
// `witness` describes the offending subset in plain text.
struct lemma_violation_error : error {
    lemma_violation_error(const std::string &w, std::string witness_text)
        : error(error_code::lemma_violation, w), witness(std::move(witness_text))
    {
    }
    std::string witness;
};

struct schema_error : error {
    explicit schema_error(const std::string &w) : error(error_code::schema, w) {}
};

} // namespace smtlab

#endif
