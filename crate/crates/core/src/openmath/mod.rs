//! OpenMath objects, the content-dictionary registry, and the XML encoding.

mod expr;
mod registry;
mod xml;

pub use expr::{format_float, parse_float, OmExpr};
pub use registry::{
    InfixForm, SymbolInfo, SymbolRegistry, PREC_ADDITIVE, PREC_MULTIPLICATIVE, PREC_POWER,
    PREC_PREFIX, PREC_RELATION,
};
pub use xml::{
    parse_openmath_xml, serialize_openmath_xml, OpenMathError, OpenMathReader, ParsedObject,
    OPENMATH_NS,
};
