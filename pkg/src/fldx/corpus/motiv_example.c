/* Interpolation table: truncating the input to an index is unstable
   near integer boundaries. Extrapolation below the table makes the
   function discontinuous at -1, so the robustness assertion must fail
   for inputs near -1 while holding for inputs inside the table. */
double interpolate(double in, double y[], int n) {
  double out;
  int index = (int) in;
  if (index < 0 || index >= n - 1) {
    out = (index < 0) ? y[0] : y[n - 1];
  } else {
    out = y[index] + (in - (double) index) * (y[index + 1] - y[index]);
  }
  /*@ assert
        \let (err_min, err_max) = accuracy_get_derr(in);
        \let cst = max_distance(y, n);
        accuracy_assert_derr(out,
          2.0 * cst * min(err_min, -err_max),
          2.0 * cst * max(-err_min, err_max)); */
  return out;
}

int main() {
  double y[4] = {0.0, 1.0, 5.0, 10.0};
  double in = read_double(0.4, 0.6);
  double out1 = interpolate(in, y, 4);
  /*@ dprint(out1); */
  return 0;
}
