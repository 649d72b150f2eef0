// Legacy code
var core = require('../core');

core.Container.prototype.getChildByName = function (name) {
  for (var i = 0; i < this.children.length; i++) {
    if (this.children[i].name === name) {
      return this.children[i];
    }
  }
  return null;
};
