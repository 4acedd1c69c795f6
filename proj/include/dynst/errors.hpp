#pragma once

#include <stdexcept>
#include <string>

namespace dynst {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define DYNST_DEFINE_ERROR(Name)                 \
  struct Name : Error {                          \
    using Error::Error;                          \
  }

DYNST_DEFINE_ERROR(ParseError);
DYNST_DEFINE_ERROR(InvariantError);
DYNST_DEFINE_ERROR(IndexError);
DYNST_DEFINE_ERROR(DomainError);
DYNST_DEFINE_ERROR(DisconnectedError);
DYNST_DEFINE_ERROR(TooManyTerminals);
DYNST_DEFINE_ERROR(CycleError);
DYNST_DEFINE_ERROR(NoSuchEdge);
DYNST_DEFINE_ERROR(NotConnected);
DYNST_DEFINE_ERROR(ModeError);
DYNST_DEFINE_ERROR(InactiveColor);
DYNST_DEFINE_ERROR(WrongColorEndpoint);
DYNST_DEFINE_ERROR(NoSuchTreeEdge);
DYNST_DEFINE_ERROR(NoSuchColor);
DYNST_DEFINE_ERROR(PortalDisconnected);
DYNST_DEFINE_ERROR(NotATerminal);
DYNST_DEFINE_ERROR(AlreadyTerminal);
DYNST_DEFINE_ERROR(NotInTree);
DYNST_DEFINE_ERROR(SequenceError);
DYNST_DEFINE_ERROR(ParamError);
DYNST_DEFINE_ERROR(ConfigError);
DYNST_DEFINE_ERROR(EngineError);

#undef DYNST_DEFINE_ERROR

}  // namespace dynst
