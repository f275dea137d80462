/// State that can be combined linearly, the only thing classical RK4 needs.
pub trait LinearState: Clone {
    /// `self + h * other`
    fn axpy(&self, h: f64, other: &Self) -> Self;
}

impl LinearState for Vec<f64> {
    fn axpy(&self, h: f64, other: &Self) -> Self {
        self.iter().zip(other).map(|(a, b)| a + h * b).collect()
    }
}

impl<T> LinearState for nalgebra::DMatrix<T>
where
    T: nalgebra::ComplexField<RealField = f64> + Copy,
{
    fn axpy(&self, h: f64, other: &Self) -> Self {
        self + other * T::from_real(h)
    }
}

impl<T> LinearState for nalgebra::DVector<T>
where
    T: nalgebra::ComplexField<RealField = f64> + Copy,
{
    fn axpy(&self, h: f64, other: &Self) -> Self {
        self + other * T::from_real(h)
    }
}

/// One classical fourth-order Runge-Kutta step of `y' = f(t, y)`.
pub fn rk4_step<S, F>(t: f64, y: &S, dt: f64, mut f: F) -> S
where
    S: LinearState,
    F: FnMut(f64, &S) -> S,
{
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * dt, &y.axpy(0.5 * dt, &k1));
    let k3 = f(t + 0.5 * dt, &y.axpy(0.5 * dt, &k2));
    let k4 = f(t + dt, &y.axpy(dt, &k3));
    y.axpy(dt / 6.0, &k1)
        .axpy(dt / 3.0, &k2)
        .axpy(dt / 3.0, &k3)
        .axpy(dt / 6.0, &k4)
}
