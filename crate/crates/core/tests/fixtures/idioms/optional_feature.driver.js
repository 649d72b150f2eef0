var core = require('./optional_feature/core');
require('./optional_feature/extras/getChildByName');
var c = new core.Container();
c.addChild({ name: 'a', v: 1 });
c.addChild({ name: 'b', v: 2 });
console.log(c.getChildByName('b').v, c.getChildByName('z'));
