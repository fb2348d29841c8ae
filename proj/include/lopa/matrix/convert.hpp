// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_MATRIX_CONVERT_HPP_
#define LOPA_MATRIX_CONVERT_HPP_

#include <memory>
#include <string>

#include "lopa/core/exception.hpp"
#include "lopa/core/linop.hpp"
#include "lopa/matrix/coo.hpp"
#include "lopa/matrix/csr.hpp"
#include "lopa/matrix/dense.hpp"
#include "lopa/matrix/matrix_data.hpp"
#include "lopa/matrix/stencil.hpp"

namespace lopa::matrix {


enum class Format { dense, csr, coo };

inline constexpr const char* to_string(Format f) noexcept
{
    switch (f) {
    case Format::dense:
        return "dense";
    case Format::csr:
        return "csr";
    case Format::coo:
        return "coo";
    }
    return "unknown";
}

inline Format parse_format(const std::string& name)
{
    if (name == "dense") {
        return Format::dense;
    }
    if (name == "csr") {
        return Format::csr;
    }
    if (name == "coo") {
        return Format::coo;
    }
    throw BadParameter("unknown format '" + name + "'");
}


/// Triples of a Dense, Csr or Coo operator. Dense drops explicit zeros.
template <typename ValueType = double>
matrix_data<ValueType, int32> extract_data(const LinOp* source)
{
    auto io = dynamic_cast<const MatrixDataIo<ValueType, int32>*>(source);
    if (io == nullptr) {
        throw NotSupported("conversion from this operator type");
    }
    return io->to_matrix_data();
}


/// Value-equivalent copy of `source` in `target` format, placed on `exec`
/// (the source's executor by default). Supported pairs are any of Dense,
/// Csr and Coo to one another, and StencilMatrix to Csr.
template <typename ValueType = double>
std::unique_ptr<LinOp> convert(const LinOp* source, Format target,
                               std::shared_ptr<const Executor> exec = nullptr)
{
    source->assert_usable();
    if (!exec) {
        exec = source->get_executor();
    }
    if (auto stencil = dynamic_cast<const StencilMatrix<ValueType>*>(source)) {
        if (target != Format::csr) {
            throw NotSupported(std::string{"conversion from stencil to "} +
                               to_string(target));
        }
        return stencil->to_csr()->clone_linop(exec);
    }
    const auto data = extract_data<ValueType>(source);
    switch (target) {
    case Format::dense: {
        auto result = Dense<ValueType>::create(exec);
        result->read(data);
        return result;
    }
    case Format::csr:
        return Csr<ValueType, int32>::create(exec, data);
    case Format::coo:
        return Coo<ValueType, int32>::create(exec, data);
    }
    throw NotSupported("unknown target format");
}


template <typename Target>
std::unique_ptr<Target> convert_to(const LinOp* source,
                                   std::shared_ptr<const Executor> exec = nullptr)
{
    using V = typename Target::value_type;
    Format f{};
    if constexpr (std::is_same_v<Target, Dense<V>>) {
        f = Format::dense;
    } else if constexpr (std::is_same_v<Target, Csr<V, int32>>) {
        f = Format::csr;
    } else if constexpr (std::is_same_v<Target, Coo<V, int32>>) {
        f = Format::coo;
    } else {
        static_assert(std::is_same_v<Target, Dense<V>>, "unsupported target format");
    }
    auto result = convert<V>(source, f, std::move(exec));
    return std::unique_ptr<Target>(static_cast<Target*>(result.release()));
}


}  // namespace lopa::matrix

#endif  // LOPA_MATRIX_CONVERT_HPP_
