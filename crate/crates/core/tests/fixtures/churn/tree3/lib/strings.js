function pad(s, n) {
  while (s.length < n) {
    s = ' ' + s;
  }
  return s;
}
