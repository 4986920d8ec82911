"""Development-time numerical verification of the core algebraic claims.

Run once to confirm derivations before freezing test expectations; not part
of the package.
"""
import numpy as np
import curvedflats as cf

g = cf.Grid(33, 33, 2 * np.pi / 32, 1.0 / 32)

# --- 1. built-form structural exactness -------------------------------
cyl = cf.make_cylinder_patch(1.0, g)
for lam in (-1.0, 0.0, 0.5, 1.0):
    form = cf.build_phi_lambda(cyl, lam)
    print(f"212 lam={lam}: algebra={max(cf.algebra_defect(form.Ax).max(), cf.algebra_defect(form.Ay).max()):.3e}",
          f"curved_flat={cf.curved_flat_defect(form):.3e}")

mer = cf.solve_meridian(lambda x: np.pi / 2 + 0.3 * np.sin(x), 1.0, g.x,
                        dtheta=lambda x: 0.3 * np.cos(x))
for lam in (-1.0, 0.0, 0.5, 1.0):
    form = cf.build_revolution_form(mer, lam, g)
    print(f"503 lam={lam}: algebra={max(cf.algebra_defect(form.Ax).max(), cf.algebra_defect(form.Ay).max()):.3e}",
          f"curved_flat={cf.curved_flat_defect(form):.3e}")
    kf = cf.CalapsoField(g, cf.conformal_factor_k(mer))
    dform = cf.build_degenerate_revolution_form(kf.k, lam, g)
    print(f"506 lam={lam}: algebra={max(cf.algebra_defect(dform.Ax).max(), cf.algebra_defect(dform.Ay).max()):.3e}",
          f"curved_flat={cf.curved_flat_defect(dform):.3e}",
          f"zc={cf.zero_curvature_residual(dform).max_norm():.3e}")

# --- 2. cylinder flatness / invalid patch ------------------------------
form1 = cf.build_phi_lambda(cyl, 1.0)
print("cylinder zc:", cf.zero_curvature_residual(form1).max_norm())
bad = cf.IsothermicPatch(g, np.zeros(g.shape), np.ones(g.shape), np.ones(g.shape))
print("invalid patch zc:", cf.zero_curvature_residual(cf.build_phi_lambda(bad, 1.0)).max_norm())

# --- 3. revolution patch residuals & cross-route form agreement --------
rp = cf.revolution_patch(mer, g)
gc = cf.gauss_codazzi_residual(rp)
print("revolution GC max:", max(np.abs(r).max() for r in gc))
fa = cf.build_phi_lambda(rp, 1.0)
fb = cf.build_revolution_form(mer, 1.0, g)
d01 = np.abs(fa.Ax - fb.Ax).max()
d02 = np.abs(fa.Ay - fb.Ay).max()
print("cross-route form diffs:", d01, d02)
# which entries differ?
dd = np.abs(fa.Ay - fb.Ay).max(axis=(0, 1))
print("Ay entry max diff:\n", np.array2string(dd, precision=2))

# --- 4. frame integration vs constant-coefficient exact ----------------
frames = cf.integrate_frame(form1)
print("frame defect:", frames.max_orthogonality_defect())
print("path independence (cylinder):", cf.path_independence_defect(form1, frames))

# exact for constant coefficients: F(i,0) = exp(i*hx*Ax)
F_exact = cf.group_exp(g.x[5] * form1.Ax[0, 0])
print("row-0 vs exp:", np.abs(frames.F[5, 0] - F_exact).max())

# --- 5. triple invariants, envelope, diagonality -----------------------
triple = cf.extract_triple(frames)
env = cf.envelope_defect(triple)
rep = cf.second_form_diagonality(triple)
print("envelope:", env, "off:", rep.off_f, rep.off_fhat)
print("b11_f interior value:", rep.b11_f[10, 10], " expected lam*e^{2u}k1 = 1 (sign?)")
print("b22_fhat:", rep.b22_fhat[10, 10], "b11_fhat:", rep.b11_fhat[10, 10])
print("E_f:", rep.E_f[10, 10], "F_f:", rep.F_f[10, 10], "G_f:", rep.G_f[10, 10])

# --- 6. Sym route -------------------------------------------------------
g65 = cf.Grid(65, 65, 2 * np.pi / 64, 1.0 / 64)
cyl65 = cf.make_cylinder_patch(1.0, g65)
frames0 = cf.integrate_frame(cf.build_phi_lambda(cyl65, 0.0))
s_f, s_fhat = cf.sym_surfaces(cyl65, frames0)
X, Y = g65.mesh()
target = np.stack([np.sin(X), np.cos(X), Y], axis=-1)
aligned, rms = cf.align_points(s_f.points, target)
print("sym cylinder rigid RMS:", rms)
_, rms_refl = cf.align_points(s_f.points, target, allow_reflection=True)
print("sym cylinder orthogonal RMS:", rms_refl)
print("sym I coeffs (E,F,G) at mid:", s_f.I_coeffs[30, 30])
print("sym II coeffs (e,f,g) at mid:", s_f.II_coeffs[30, 30])
print("sym fhat II at mid (expect -k1, k2 = -1, 0):", s_fhat.II_coeffs[30, 30])
print("sym fhat I at mid (expect e^{-2u}=1):", s_fhat.I_coeffs[30, 30])

# --- 7. dual ------------------------------------------------------------
dual = cf.euclidean_dual(s_f, cyl65.u)
# dual of cylinder: congruent after one axial reflection
refl = dual.points.copy()
refl[..., 0] *= -1.0
_, rms_d = cf.align_points(refl, target, allow_reflection=True)
print("dual reflected-aligned RMS:", rms_d)
ddual = cf.euclidean_dual(dual, -cyl65.u)
shift = ddual.points - s_f.points
shift = shift - shift.reshape(-1, 3).mean(axis=0)
print("dual(dual) - f RMS after translation:", np.sqrt((shift ** 2).sum(-1).mean()))
print("dual II at mid (expect -k1, k2):", dual.II_coeffs[30, 30])
print("dual I at mid (expect e^{-2u} = 1):", dual.I_coeffs[30, 30])

# --- 8. calapso ---------------------------------------------------------
kf = cf.CalapsoField(g, cf.conformal_factor_k(mer))
res = cf.calapso_residual(kf)
print("revolution k residual:", np.abs(res).max())
lam = 1.0
u0 = cf.u0_revolution_preset(kf, lam)
u, defect = cf.integrate_u(kf, u0)
print("u vs lam^2-k^2:", np.abs(u - (lam**2 - kf.k**2)).max(), "compat defect:", defect)

mform = cf.build_moebius_frame_form(kf, u, lam=lam)
print("505 algebra:", max(cf.algebra_defect(mform.Ax).max(), cf.algebra_defect(mform.Ay).max()))
print("505 curved-flat defect (expected ~max k^2 + |k_x|):", cf.curved_flat_defect(mform),
      "max k^2:", (kf.k ** 2).max())
print("505 zc:", cf.zero_curvature_residual(mform).max_norm())

cform = cf.build_conformal_change_form(kf, u, lam=lam)
print("406 algebra:", max(cf.algebra_defect(cform.Ax).max(), cf.algebra_defect(cform.Ay).max()))
print("406 zc:", cf.zero_curvature_residual(cform).max_norm())
print("406 tau-slot:", np.abs(cform.Ax[..., 2, 4]).max(), np.abs(cform.Ay[..., 2, 4]).max())

# --- 9. the sphere-shift recipe: 505 frames -> 506 form -----------------
mframes = cf.integrate_frame(mform)
K = cf.sphere_shift_change(kf, lam)
changed = cf.apply_frame_change(mframes, K)
meas = cf.measured_connection(changed)
target_form = cf.build_degenerate_revolution_form(kf.k, lam, g)
dAx = np.abs(meas.Ax - target_form.Ax)[2:-2, 2:-2].max()
dAy = np.abs(meas.Ay - target_form.Ay)[2:-2, 2:-2].max()
print("recipe vs 506: dAx:", dAx, "dAy:", dAy)
print("entrywise Ax diff:\n", np.array2string(np.abs(meas.Ax - target_form.Ax)[2:-2, 2:-2].max(axis=(0, 1)), precision=2))
print("entrywise Ay diff:\n", np.array2string(np.abs(meas.Ay - target_form.Ay)[2:-2, 2:-2].max(axis=(0, 1)), precision=2))
