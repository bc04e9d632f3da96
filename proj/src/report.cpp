#include "jumplab/report.hpp"

#include "jumplab/errors.hpp"

namespace jumplab {

const char* method_name(Method m) {
    switch (m) {
        case Method::AJ: return "aj";
        case Method::LM: return "lm";
        case Method::CC: return "cc";
        case Method::PA: return "pa";
        case Method::LA: return "la";
        case Method::CCN: return "ccn";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "aj") return Method::AJ;
    if (name == "lm") return Method::LM;
    if (name == "cc") return Method::CC;
    if (name == "pa" || name == "ajj") return Method::PA;
    if (name == "la") return Method::LA;
    if (name == "ccn") return Method::CCN;
    raise(ErrorCode::InvalidArgument, "unknown method name: " + name);
}

}  // namespace jumplab
