pub mod acceptance;
pub mod complex_poly;
pub mod covering_domination;
pub mod double_section_flows;
pub mod entire_expr;
pub mod error;
pub mod flow_oracle;
pub mod gap_constructor;
pub mod graph_complement_flows;
pub mod sampling;
pub mod scalar;
pub mod tangent_catalog;

pub use error::{Error, Result};

/// Concrete `f64` instantiations of the generic types.
pub mod f64 {
    pub type Cx = num_complex::Complex<f64>;
    pub type Poly = crate::complex_poly::Poly<f64>;
    pub type RationalFn = crate::complex_poly::RationalFn<f64>;
    pub type SpherePoint = crate::complex_poly::SpherePoint<f64>;
    pub type EntireExpr = crate::entire_expr::EntireExpr<f64>;
    pub type ExpPoly = crate::entire_expr::ExpPoly<f64>;
    pub type GapCertificate = crate::gap_constructor::GapCertificate<f64>;
    pub type VerticalFieldZu = crate::graph_complement_flows::VerticalFieldZu<f64>;
    pub type DominatingMapF = crate::graph_complement_flows::DominatingMapF<f64>;
    pub type DoubleSection = crate::double_section_flows::DoubleSection<f64>;
    pub type RiccatiField = crate::double_section_flows::RiccatiField<f64>;
    pub type DominatingMapG = crate::double_section_flows::DominatingMapG<f64>;
    pub type Section = crate::double_section_flows::Section<f64>;
    pub type PlaneField = crate::tangent_catalog::PlaneField<f64>;
    pub type FiberAutomorphism = crate::tangent_catalog::FiberAutomorphism<f64>;
    pub type FamilySpec = crate::tangent_catalog::FamilySpec<f64>;
    pub type Curve = crate::tangent_catalog::Curve<f64>;
    pub type CuspCurve = crate::covering_domination::CuspCurve<f64>;
    pub type IntegrationSpec = crate::flow_oracle::IntegrationSpec<f64>;
    pub type SampleSpec = crate::sampling::SampleSpec<f64>;
}
