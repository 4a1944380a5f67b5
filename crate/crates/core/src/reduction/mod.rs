pub mod driver;
pub mod shear;
pub mod sl2;
pub mod stability;
