// Legacy code
module.exports = Namespace;
function Namespace(name) {  // constructor function
  this.name = name;
}
Namespace.prototype.of = function(room) {
  return this.name + '/' + room;
};
