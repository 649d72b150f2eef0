function Parallax(element) {
  this.element = element;
}
Parallax.prototype.enable = function() {
  this.orientationStatus = 1;
  return this.ww === null;
};
// Prototype properties (legacy code)
Parallax.prototype.ww = null;
Parallax.prototype.orientationStatus = 0;
