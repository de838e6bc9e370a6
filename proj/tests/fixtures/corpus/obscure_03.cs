using Xunit;

namespace Fixtures.Obscure
{
    public class TenDeclarationsTests
    {
        [Fact]
        public void TotalsNineInputs()
        {
            var a = 1;
            var b = 2;
            var c = 3;
            var d = 4;
            var e = 5;
            var f = 6;
            var g = 7;
            var h = 8;
            var expected = 36;
            var total = a + b + c + d + e + f + g + h;
            Assert.Equal(expected, total);
        }
    }

    public class MultiDeclaratorTests
    {
        [Fact]
        public void ManyVariablesFewStatements()
        {
            int a = 1, b = 2, c = 3;
            int d = 4, e = 5;
            var f = 6;
            var g = 7;
            var h = 8;
            var i = 9;
            var j = 10;
            var expected = 55;
            var total = a + b + c + d + e + f + g + h + i + j;
            Assert.Equal(expected, total);
        }
    }
}
