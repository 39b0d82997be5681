#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qals
{

/*! \brief Syntax or consistency error in an input document, tagged with its 1-based line. */
class parse_error : public std::runtime_error
{
public:
  parse_error( uint32_t line, std::string const& message )
      : std::runtime_error( "line " + std::to_string( line ) + ": " + message ), _line( line )
  {
  }

  uint32_t line() const { return _line; }

private:
  uint32_t _line;
};

class library_error : public std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/*! \brief No exact supergate exists for some node; the library cannot cover the network. */
class library_incomplete : public std::runtime_error
{
  using std::runtime_error::runtime_error;
};

class interface_mismatch : public std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/*! \brief The estimated output error of a mapping exceeds the error bound. */
class mapping_invalid : public std::runtime_error
{
public:
  mapping_invalid( double max_error, double bound )
      : std::runtime_error( "estimated output error " + std::to_string( max_error ) + " exceeds bound " + std::to_string( bound ) ),
        max_error( max_error )
  {
  }

  double max_error;
};

} // namespace qals
